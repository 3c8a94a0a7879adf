#include "elax/report.hpp"

#include <json.hpp>
#include <sstream>

namespace elax {

namespace {

nlohmann::ordered_json cj(const cplx& z) { return {z.real(), z.imag()}; }

nlohmann::ordered_json params_json(const ModelParams& par) {
    nlohmann::ordered_json j;
    j["tau"] = cj(par.tau);
    j["eta"] = cj(par.eta);
    j["c"] = cj(par.c);
    j["nu"] = cj(par.nu);
    j["k"] = cj(par.k);
    j["N"] = par.N;
    j["n"] = par.n;
    return j;
}

}  // namespace

std::string RunReport::to_json() const {
    nlohmann::ordered_json j;
    j["check_id"] = check_id;
    j["anchor"] = anchor;
    j["params"] = params_json(params);
    j["seed"] = seed;
    j["tolerance"] = tolerance;
    auto rows_json = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json rj;
        rj["label"] = r.label;
        rj["residual_max"] = r.residual;
        rj["residual_scale"] = r.scale;
        rj["pass"] = r.pass;
        rows_json.push_back(std::move(rj));
    }
    j["residuals"] = std::move(rows_json);
    j["pass"] = all_pass();
    return j.dump(2) + "\n";
}

std::string RunReport::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "check_id,seed,residual_max,pass\n";
    for (const auto& r : rows)
        os << check_id << ":" << r.label << "," << seed << "," << r.residual << ","
           << (r.pass ? "true" : "false") << "\n";
    return os.str();
}

std::string matrix_to_json(const CMat& m, const std::string& label, cplx spectral_parameter) {
    nlohmann::ordered_json j;
    j["label"] = label;
    j["size"] = m.size();
    j["spectral_parameter"] = cj(spectral_parameter);
    auto rows = nlohmann::ordered_json::array();
    for (int i = 0; i < m.size(); ++i) {
        auto row = nlohmann::ordered_json::array();
        for (int k = 0; k < m.size(); ++k) row.push_back(cj(m(i, k)));
        rows.push_back(std::move(row));
    }
    j["entries"] = std::move(rows);
    return j.dump();
}

std::string tensor_to_json(const Tensor& t) {
    nlohmann::ordered_json j;
    j["size"] = t.dim();
    auto entries = nlohmann::ordered_json::array();
    for (int i = 0; i < t.dim(); ++i)
        for (int jj = 0; jj < t.dim(); ++jj)
            for (int k = 0; k < t.dim(); ++k)
                for (int l = 0; l < t.dim(); ++l) {
                    const cplx v = t.ent(i, jj, k, l);
                    if (v == cplx{0.0}) continue;
                    nlohmann::ordered_json e;
                    e["ij"] = {i, jj};
                    e["kl"] = {k, l};
                    e["value"] = cj(v);
                    entries.push_back(std::move(e));
                }
    j["entries"] = std::move(entries);
    return j.dump();
}

std::string params_to_json_string(const ModelParams& par) { return params_json(par).dump(); }

}  // namespace elax
