#pragma once

#include "json.hpp"
#include "setrep/analysis.hpp"
#include "setrep/decoder.hpp"

namespace setrep {

using nlohmann::json;

json to_json(const SetMatrix& x);
SetMatrix set_matrix_from_json(const json& j);

json to_json(const WeightHeader& h);
WeightHeader weight_header_from_json(const json& j);

json to_json(const Embedding& e);
Embedding embedding_from_json(const json& j);

json to_json(const DecodeReport& r);
json to_json(const DimensionReport& r);
json to_json(const ClaimReport& r);
json to_json(Complex z);

}  // namespace setrep
