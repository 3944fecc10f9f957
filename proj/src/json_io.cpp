#include "setrep/json_io.hpp"

namespace setrep {

json to_json(const SetMatrix& x) {
    json rows = json::array();
    for (int i = 0; i < x.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < x.cols(); ++j) row.push_back(x(i, j));
        rows.push_back(std::move(row));
    }
    return {{"n", x.rows()}, {"d", x.cols()}, {"rows", std::move(rows)}};
}

SetMatrix set_matrix_from_json(const json& j) {
    int n = j.at("n").get<int>();
    int d = j.at("d").get<int>();
    const json& rows = j.at("rows");
    if (static_cast<int>(rows.size()) != n) throw ShapeError("rows count does not match n");
    std::vector<double> flat;
    flat.reserve(static_cast<size_t>(n) * d);
    for (const json& row : rows) {
        if (static_cast<int>(row.size()) != d) throw ShapeError("row length does not match d");
        for (const json& v : row) flat.push_back(v.get<double>());
    }
    return SetMatrix(n, d, std::move(flat));
}

json to_json(const WeightHeader& h) {
    return {{"arch", to_string(h.arch)},
            {"n", h.n},
            {"d", h.d},
            {"bank_mode", to_string(h.bank_mode)},
            {"seed", h.seed}};
}

WeightHeader weight_header_from_json(const json& j) {
    WeightHeader h;
    h.arch = arch_from_string(j.at("arch").get<std::string>());
    h.n = j.at("n").get<int>();
    h.d = j.at("d").get<int>();
    h.bank_mode = bank_mode_from_string(j.at("bank_mode").get<std::string>());
    h.seed = j.at("seed").get<std::uint64_t>();
    return h;
}

json to_json(const Embedding& e) {
    return {{"arch", to_string(e.arch)},
            {"n", e.n},
            {"d", e.d},
            {"values", e.values},
            {"weights", to_json(e.header)}};
}

Embedding embedding_from_json(const json& j) {
    Embedding e;
    e.arch = arch_from_string(j.at("arch").get<std::string>());
    e.n = j.at("n").get<int>();
    e.d = j.at("d").get<int>();
    e.values = j.at("values").get<std::vector<double>>();
    e.header = weight_header_from_json(j.at("weights"));
    return e;
}

json to_json(const DecodeReport& r) {
    return {{"recovered", to_json(r.recovered)},
            {"anchor_index", r.anchor_index},
            {"residual", r.residual},
            {"verified", r.verified},
            {"candidates_tried", r.candidates_tried}};
}

json to_json(const DimensionReport& r) {
    json out = {{"arch", to_string(r.arch)}, {"n", r.n},          {"d", r.d},
                {"k1", r.k1},                {"l", r.l},          {"lower_bound", r.lower_bound},
                {"upper_bound", r.upper_bound}};
    if (r.arch == Arch::LP) {
        out["k2"] = r.k2;
        out["k"] = r.k;
    }
    return out;
}

json to_json(const ClaimReport& r) {
    return {{"claim_id", r.claim_id}, {"passed", r.passed}, {"details", r.details}};
}

json to_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

}  // namespace setrep
