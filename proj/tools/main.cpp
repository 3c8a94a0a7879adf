// Batch driver: every verification of the laboratory as a reproducible,
// seeded command with JSON/CSV reporting.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "elax/fieldkit.hpp"
#include "elax/flows.hpp"
#include "elax/limits.hpp"
#include "elax/report.hpp"
#include "elax/ultralocal.hpp"
#include "elax/verify.hpp"

using namespace elax;

namespace {

struct Options {
    std::uint64_t seed = 1;
    int trials = 3;
    double tol = 0.0;  // 0: use the command default
    std::string out;
    std::string emit = "json";
    std::string config;
    ModelParams par;
    int fourier_modes = 2;
    double t_end = 1.0;
    double dt = 1e-3;
};

void add_common(CLI::App* cmd, Options& opt, std::array<double, 2>& tau, std::array<double, 2>& eta,
                std::array<double, 2>& nu, std::array<double, 2>& cc, std::array<double, 2>& kk) {
    cmd->add_option("--seed", opt.seed, "deterministic seed");
    cmd->add_option("--trials", opt.trials, "number of sampled states")->check(CLI::PositiveNumber);
    cmd->add_option("--tol", opt.tol, "scaled residual tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--tau", tau, "elliptic modulus (re im)");
    cmd->add_option("--eta", eta, "relativistic deformation (re im)");
    cmd->add_option("--nu", nu, "CM coupling (re im)");
    cmd->add_option("--c", cc, "relativistic constant (re im)");
    cmd->add_option("--k", kk, "field derivative coupling (re im)");
    cmd->add_option("--N", opt.par.N, "particle number")->check(CLI::PositiveNumber);
    cmd->add_option("--n", opt.par.n, "chain sites")->check(CLI::PositiveNumber);
    cmd->add_option("--M", opt.fourier_modes, "Fourier truncation");
    cmd->add_option("--out", opt.out, "output path (stdout when empty)");
    cmd->add_option("--emit", opt.emit, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));
    cmd->add_option("--config", opt.config, "JSON config file overriding the flags");
}

int apply_config(Options& opt) {
    if (opt.config.empty()) return 0;
    std::ifstream in(opt.config);
    if (!in) {
        std::cerr << "cannot open config file " << opt.config << "\n";
        return 2;
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        std::cerr << "config parse failure: " << e.what() << "\n";
        return 2;
    }
    auto getc = [&](const char* key, cplx& dst) {
        if (j.contains(key)) dst = cplx{j[key][0].get<double>(), j[key][1].get<double>()};
    };
    if (j.contains("seed")) opt.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("trials")) opt.trials = j["trials"].get<int>();
    if (j.contains("tol")) opt.tol = j["tol"].get<double>();
    if (j.contains("N")) opt.par.N = j["N"].get<int>();
    if (j.contains("n")) opt.par.n = j["n"].get<int>();
    if (j.contains("M")) opt.fourier_modes = j["M"].get<int>();
    getc("tau", opt.par.tau);
    getc("eta", opt.par.eta);
    getc("nu", opt.par.nu);
    getc("c", opt.par.c);
    getc("k", opt.par.k);
    if (opt.trials < 1 || (opt.tol != 0.0 && opt.tol <= 0.0)) {
        std::cerr << "invalid config: trials must be >= 1 and tol > 0\n";
        return 3;
    }
    return 0;
}

int emit_report(const RunReport& rep, const Options& opt) {
    if (opt.out.empty()) {
        std::cout << rep.to_json();
        return rep.all_pass() ? 0 : 1;
    }
    auto write = [&](const std::string& path, const std::string& text) {
        std::ofstream os(path, std::ios::binary);
        if (!os) return false;
        os << text;
        return bool(os);
    };
    bool ok = true;
    if (opt.emit == "json" || opt.emit == "both") ok = ok && write(opt.out, rep.to_json());
    if (opt.emit == "csv" || opt.emit == "both") ok = ok && write(opt.out + ".csv", rep.to_csv());
    if (!ok) {
        std::cerr << "cannot write report to " << opt.out << "\n";
        return 2;
    }
    return rep.all_pass() ? 0 : 1;
}

double tol_or(const Options& opt, double dflt) { return opt.tol > 0.0 ? opt.tol : dflt; }

int cmd_identities(const Options& opt) {
    const double tol = tol_or(opt, 1e-10);
    RunReport rep;
    rep.check_id = "elliptic-identities";
    rep.anchor = "kronecker-addition-suite";
    rep.params = opt.par;
    rep.seed = opt.seed;
    rep.tolerance = tol;
    const auto suite = identity_suite(opt.seed, opt.trials, opt.par.modulus());
    for (const auto& e : suite.entries) rep.add(e.name, e.max_residual, 1.0, tol);
    return emit_report(rep, opt);
}

int cmd_verify(const Options& opt, const std::string& which) {
    const double tol = tol_or(opt, default_tolerance);
    RunReport rep;
    rep.params = opt.par;
    rep.seed = opt.seed;
    rep.tolerance = tol;
    rep.check_id = "verify-" + which;

    for (int t = 0; t < opt.trials; ++t) {
        const std::uint64_t s = opt.seed + std::uint64_t(t);
        if (which == "rs") {
            rep.anchor = "quadratic-r-matrix-structure";
            const auto state = sample_rs(s, opt.par);
            const auto grid = spectral_grid(s + 1000, state.q, opt.par, 3, 3);
            for (const auto variant :
                 {WeightVariant::standard, WeightVariant::plus_eta, WeightVariant::square_root})
                for (const auto& [z, w] : grid)
                    rep.add(verify_rs_quadratic(state, z, w, opt.par, variant, tol));
        } else if (which == "cm") {
            rep.anchor = "linear-r-matrix-structure";
            const auto state = sample_rs(s, opt.par);
            const auto grid = spectral_grid(s + 1000, state.q, opt.par, 3, 3);
            for (const auto& [z, w] : grid) rep.add(verify_cm_linear(state, z, w, opt.par, tol_or(opt, 1e-9)));
        } else if (which == "chain") {
            rep.anchor = "lattice-quadratic-r-matrix-structure";
            const auto state = sample_chain(s, opt.par);
            const auto grid = spectral_grid(s + 1000, state.q, opt.par, 2, 2);
            for (int a = 0; a < opt.par.n; ++a)
                for (int b = 0; b < opt.par.n; ++b)
                    for (const auto& [z, w] : grid)
                        rep.add(verify_chain_quadratic(state, a, b, z, w, opt.par, tol));
        } else if (which == "monodromy") {
            rep.anchor = "monodromy-r-matrix-structure";
            const auto state = sample_chain(s, opt.par);
            const auto grid = spectral_grid(s + 1000, state.q, opt.par, 2, 2);
            for (const auto& [z, w] : grid) rep.add(verify_monodromy_quadratic(state, z, w, opt.par, tol));
        } else if (which == "rowgauge") {
            rep.anchor = "row-weighted-gauge-r-matrix-structure";
            const auto state = sample_rs(s, opt.par);
            const auto grid = spectral_grid(s + 1000, state.q, opt.par, 3, 3);
            for (const auto& [z, w] : grid) rep.add(verify_rowgauge_quadratic(state, z, w, opt.par, tol));
        } else if (which == "field-ultralocal") {
            rep.anchor = "maillet-ultralocal-coefficient";
            ModelParams fp = opt.par;
            fp.k = cplx{1.0};
            const auto cfg = sample_field(s, fp.N, opt.fourier_modes, 0.02, fp, true);
            Rng rng(s + 1);
            const double x = 2.0 * pi * rng.uniform();
            const auto grid = spectral_grid(s + 1000, field_vals(cfg, cplx{x}).q, fp, 1, 1);
            const auto u = verify_field_ultralocal(cfg, x, grid[0].first, grid[0].second, fp, {}, tol);
            rep.add("total", u.residual_total, u.residual_scale, tol);
            for (const auto& b : u.blocks) {
                const bool strict = b.label == "block-1" || b.label == "block-3" || b.label == "block-5" ||
                                    b.label == "blocks-2-6-exchange";
                if (strict) rep.add(b.label, b.max_deviation, b.scale, 1e-6);
            }
        } else if (which == "field-coefficient") {
            rep.anchor = "maillet-delta-prime-coefficient";
            ModelParams fp = opt.par;
            fp.k = cplx{1.0};
            const auto cfg = sample_field(s, fp.N, opt.fourier_modes, 0.02, fp, true);
            Rng rng(s + 1);
            const double x = 2.0 * pi * rng.uniform();
            const auto grid = spectral_grid(s + 1000, field_vals(cfg, cplx{x}).q, fp, 1, 1);
            rep.add(verify_nonultralocal_coefficient(cfg, x, grid[0].first, grid[0].second, fp,
                                                     tol_or(opt, 1e-10)));
        } else {
            std::cerr << "unknown verify target " << which << "\n";
            return 3;
        }
    }
    return emit_report(rep, opt);
}

int cmd_flow(const Options& opt, const std::string& model) {
    const double tol = tol_or(opt, 1e-7);
    RunReport rep;
    rep.check_id = "flow-" + model;
    rep.anchor = "isospectral-drift";
    rep.params = opt.par;
    rep.seed = opt.seed;
    rep.tolerance = tol;

    const FlowModel fm = model == "rs" ? FlowModel::rs : (model == "cm" ? FlowModel::cm : FlowModel::chain);
    if (model != "rs" && model != "cm" && model != "chain") {
        std::cerr << "unknown flow model " << model << "\n";
        return 3;
    }
    try {
        Trajectory traj;
        std::vector<cplx> q0;
        if (fm == FlowModel::chain) {
            const auto state = sample_chain(opt.seed, opt.par);
            q0 = state.q;
            traj = integrate(fm, state, opt.t_end, opt.dt, opt.par, Scheme::rk4, 0.02);
        } else {
            const auto state = sample_rs(opt.seed, opt.par);
            q0 = state.q;
            traj = integrate(fm, state, opt.t_end, opt.dt, opt.par, Scheme::rk4, 0.02);
        }
        Rng rng(opt.seed + 7);
        const cplx z0 = sample_spectral(rng, q0, opt.par, 0.03);
        const auto cons = conservation_report(traj, opt.par, {z0}, {1, 2, 3});
        for (const auto& [id, drift] : cons.max_drift) rep.add(id, drift, 1.0, tol);
        if (!opt.out.empty() && (opt.emit == "csv" || opt.emit == "both")) {
            std::ofstream os(opt.out + ".drift.csv", std::ios::binary);
            if (!os) {
                std::cerr << "cannot write drift table\n";
                return 2;
            }
            os << conservation_to_csv(cons);
        }
    } catch (const guard_violation_error& e) {
        rep.add(std::string("guard-violation: ") + e.what(), 1.0, 0.0, tol);
        const int rc = emit_report(rep, opt);
        return rc == 0 ? 1 : rc;
    }
    return emit_report(rep, opt);
}

int cmd_limit(const Options& opt, const std::string& which) {
    const double tol = tol_or(opt, 1e-6);
    RunReport rep;
    rep.check_id = "limit-" + which;
    rep.params = opt.par;
    rep.seed = opt.seed;
    rep.tolerance = tol;

    for (int t = 0; t < opt.trials; ++t) {
        const std::uint64_t s = opt.seed + std::uint64_t(t);
        if (which == "rs2cm-lax") {
            rep.anchor = "nonrelativistic-lax-expansion";
            const auto state = sample_rs(s, opt.par);
            Rng rng(s + 3);
            const cplx z = sample_spectral(rng, state.q, opt.par, 0.03);
            rep.add(verify_rs_to_cm_lax(state, z, opt.par));
        } else if (which == "rs2cm-bracket") {
            rep.anchor = "nonrelativistic-bracket-limit";
            const auto state = sample_rs(s, opt.par);
            const auto grid = spectral_grid(s + 3, state.q, opt.par, 1, 1, 0.03);
            rep.add(verify_rs_to_cm_bracket(state, grid[0].first, grid[0].second, opt.par));
        } else if (which == "residues") {
            rep.anchor = "weight-shift-residue-tensors";
            const auto state = sample_rs(s, opt.par);
            const auto grid = spectral_grid(s + 3, state.q, opt.par, 1, 1, 0.03);
            rep.add(verify_residue_s_terms(state, grid[0].first, grid[0].second, opt.par));
        } else if (which == "field-U") {
            rep.anchor = "field-lax-nonrelativistic-expansion";
            ModelParams fp = opt.par;
            fp.k = cplx{1.0};
            const auto cfg = sample_field(s, fp.N, opt.fourier_modes, 0.02, fp);
            Rng rng(s + 3);
            const double x = 2.0 * pi * rng.uniform();
            const cplx z = sample_spectral(rng, field_vals(cfg, cplx{x}).q, fp, 0.03);
            rep.add(verify_field_U_limit(cfg, x, z, fp));
        } else {
            std::cerr << "unknown limit target " << which << "\n";
            return 3;
        }
    }
    return emit_report(rep, opt);
}

int cmd_field(const Options& opt, const std::string& which) {
    const double tol = tol_or(opt, 1e-7);
    RunReport rep;
    rep.check_id = "field-" + which;
    rep.params = opt.par;
    rep.seed = opt.seed;
    rep.tolerance = tol;

    for (int t = 0; t < opt.trials; ++t) {
        const std::uint64_t s = opt.seed + std::uint64_t(t);
        Rng rng(s + 5);
        if (which == "zs-cm") {
            rep.anchor = "zakharov-shabat-residual";
            const auto cfg = sample_field(s, opt.par.N, opt.fourier_modes, 0.02, opt.par, true);
            const double x = 2.0 * pi * rng.uniform();
            const cplx z = sample_spectral(rng, field_vals(cfg, cplx{x}).q, opt.par, 0.03);
            const CMat U = cm_field_U(cfg, x, z, opt.par);
            const CMat V = cm_field_V(cfg, x, z, opt.par);
            const double scale = std::max(1.0, U.max_abs() * V.max_abs());
            rep.add("zs-cm", cm_zs_residual(cfg, x, z, opt.par), scale, tol);
        } else if (which == "zs-rs") {
            rep.anchor = "semidiscrete-zakharov-shabat-residual";
            const cplx eps{0.13, 0.0};
            const auto cfg = sample_field(s, opt.par.N, opt.fourier_modes, 0.02, opt.par);
            const double x = 2.0 * pi * rng.uniform();
            const cplx z = sample_spectral(rng, field_vals(cfg, cplx{x}).q, opt.par, 0.03);
            const CMat U = rs_field_U(cfg, x, z, eps, opt.par);
            const CMat V = rs_field_V(cfg, x, z, eps, opt.par);
            const double scale = std::max(1.0, U.max_abs() * V.max_abs());
            rep.add("zs-rs", rs_zs_residual(cfg, x, z, eps, opt.par), scale, tol);
        } else if (which == "density-agreement") {
            rep.anchor = "hamiltonian-density-forms";
            const auto cfg = sample_field(s, opt.par.N, opt.fourier_modes, 0.02, opt.par);
            double worst = 0.0, scale = 1.0;
            for (int node = 0; node < 16; ++node) {
                const double x = 2.0 * pi * node / 16;
                const cplx a = cm_field_density(cfg, x, opt.par);
                const cplx b = cm_field_density_alt(cfg, x, opt.par);
                worst = std::max(worst, std::abs(a - b));
                scale = std::max(scale, std::abs(a));
            }
            rep.add("density-agreement", worst, scale, tol_or(opt, 1e-10));
        } else {
            std::cerr << "unknown field target " << which << "\n";
            return 3;
        }
    }
    return emit_report(rep, opt);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification laboratory for elliptic many-body r-matrix structures"};
    app.require_subcommand(1);

    Options opt;
    std::array<double, 2> tau{opt.par.tau.real(), opt.par.tau.imag()};
    std::array<double, 2> eta{opt.par.eta.real(), opt.par.eta.imag()};
    std::array<double, 2> nu{opt.par.nu.real(), opt.par.nu.imag()};
    std::array<double, 2> cc{opt.par.c.real(), opt.par.c.imag()};
    std::array<double, 2> kk{opt.par.k.real(), opt.par.k.imag()};

    auto* identities = app.add_subcommand("identities", "addition-formula suite");
    auto* verify = app.add_subcommand("verify", "bracket-structure residuals");
    auto* flow = app.add_subcommand("flow", "integrate and certify conservation");
    auto* limit = app.add_subcommand("limit", "nonrelativistic limit extractions");
    auto* field = app.add_subcommand("field", "field-theory residuals");

    std::string which;
    verify->add_option("--which", which, "rs, cm, chain, monodromy, rowgauge, field-ultralocal, field-coefficient")
        ->required();
    std::string flow_model = "rs";
    flow->add_option("--model", flow_model, "rs, cm or chain");
    flow->add_option("--tend", opt.t_end, "integration time")->check(CLI::PositiveNumber);
    flow->add_option("--dt", opt.dt, "step size")->check(CLI::PositiveNumber);
    std::string limit_which;
    limit->add_option("--which", limit_which, "rs2cm-lax, rs2cm-bracket, residues, field-U")->required();
    std::string field_which;
    field->add_option("--which", field_which, "zs-cm, zs-rs, density-agreement")->required();

    for (auto* cmd : {identities, verify, flow, limit, field}) add_common(cmd, opt, tau, eta, nu, cc, kk);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    opt.par.tau = {tau[0], tau[1]};
    opt.par.eta = {eta[0], eta[1]};
    opt.par.nu = {nu[0], nu[1]};
    opt.par.c = {cc[0], cc[1]};
    opt.par.k = {kk[0], kk[1]};
    if (const int rc = apply_config(opt); rc != 0) return rc;

    try {
        if (app.got_subcommand(identities)) return cmd_identities(opt);
        if (app.got_subcommand(verify)) return cmd_verify(opt, which);
        if (app.got_subcommand(flow)) return cmd_flow(opt, flow_model);
        if (app.got_subcommand(limit)) return cmd_limit(opt, limit_which);
        if (app.got_subcommand(field)) return cmd_field(opt, field_which);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "run failure: " << e.what() << "\n";
        return 1;
    }
    return 3;
}
