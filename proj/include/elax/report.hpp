#ifndef ELAX_REPORT_HPP
#define ELAX_REPORT_HPP

#include <string>
#include <vector>

#include "elax/flows.hpp"
#include "elax/limits.hpp"
#include "elax/linalg.hpp"
#include "elax/ultralocal.hpp"
#include "elax/verify.hpp"

namespace elax {

/// One emitted verification record: a residual with its scale and verdict.
struct ReportRow {
    std::string label;
    double residual = 0.0;
    double scale = 0.0;
    bool pass = true;
};

/// Assembled run report with deterministic JSON/CSV serialization (fixed
/// field order, no timestamps; identical runs emit identical bytes).
struct RunReport {
    std::string check_id;
    std::string anchor;
    ModelParams params;
    std::uint64_t seed = 0;
    double tolerance = 0.0;
    std::vector<ReportRow> rows;

    bool all_pass() const {
        for (const auto& r : rows)
            if (!r.pass) return false;
        return true;
    }
    double worst_residual() const {
        double w = 0.0;
        for (const auto& r : rows) w = std::max(w, r.residual);
        return w;
    }

    void add(const std::string& label, double residual, double scale, double tol) {
        rows.push_back({label, residual, scale, residual <= tol * std::max(1.0, scale)});
    }
    void add(const ResidualReport& rep) {
        rows.push_back({rep.check_id, rep.residual_max, rep.residual_scale, rep.pass});
    }
    void add(const LimitReport& rep) {
        for (const auto& c : rep.checks)
            rows.push_back({rep.check_id + ":" + c.label, c.max_deviation, c.scale,
                            c.max_deviation <= rep.tolerance * std::max(1.0, c.scale)});
    }

    std::string to_json() const;
    std::string to_csv() const;
};

std::string matrix_to_json(const CMat& m, const std::string& label, cplx spectral_parameter);
std::string tensor_to_json(const Tensor& t);
std::string params_to_json_string(const ModelParams& par);

}  // namespace elax

#endif
