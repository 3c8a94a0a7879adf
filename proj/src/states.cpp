#include "elax/states.hpp"

#include <json.hpp>

#include "elax/errors.hpp"

namespace elax {

bool rs_state_ok(const RSState& s, const ModelParams& par, double guard) {
    const int N = s.particles();
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            if (i == j) continue;
            const cplx d = s.q[i] - s.q[j];
            if (lattice_distance(d, par.tau) < guard) return false;
            if (lattice_distance(d + par.eta, par.tau) < guard) return false;
            if (lattice_distance(d - par.eta, par.tau) < guard) return false;
        }
    return true;
}

bool chain_state_ok(const ChainState& s, const ModelParams& par, double guard) {
    const int n = s.sites, N = s.particles_per_site;
    for (int a = 0; a < n; ++a) {
        const int ap = (a - 1 + n) % n;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                if (i != j && lattice_distance(s.qa(a, i) - s.qa(a, j), par.tau) < guard) return false;
                if (lattice_distance(s.qa(ap, i) - s.qa(a, j) + par.eta, par.tau) < guard) return false;
            }
    }
    return true;
}

RSState sample_rs(std::uint64_t seed, const ModelParams& par, double guard) {
    Rng rng(seed);
    for (int attempt = 0; attempt < sampler_max_rejections; ++attempt) {
        RSState s;
        s.p.resize(par.N);
        s.q.resize(par.N);
        for (int i = 0; i < par.N; ++i) s.q[i] = rng.in_cell(par.tau);
        for (int i = 0; i < par.N; ++i) s.p[i] = rng.in_unit_disk();
        if (rs_state_ok(s, par, guard)) return s;
    }
    throw sampler_exhausted_error("sample_rs: rejection limit reached");
}

ChainState sample_chain(std::uint64_t seed, const ModelParams& par, double guard) {
    Rng rng(seed);
    for (int attempt = 0; attempt < sampler_max_rejections; ++attempt) {
        ChainState s;
        s.sites = par.n;
        s.particles_per_site = par.N;
        s.p.resize(std::size_t(par.n) * par.N);
        s.q.resize(std::size_t(par.n) * par.N);
        for (auto& q : s.q) q = rng.in_cell(par.tau);
        for (auto& p : s.p) p = rng.in_unit_disk();
        if (chain_state_ok(s, par, guard)) return s;
    }
    throw sampler_exhausted_error("sample_chain: rejection limit reached");
}

cplx sample_spectral(Rng& rng, const std::vector<cplx>& q, const ModelParams& par, double guard) {
    const int N = int(q.size());
    for (int attempt = 0; attempt < sampler_max_rejections; ++attempt) {
        const cplx z = rng.in_cell(par.tau);
        bool ok = lattice_distance(z, par.tau) >= guard;
        for (int i = 0; ok && i < N; ++i)
            for (int j = 0; ok && j < N; ++j)
                if (lattice_distance(z + q[i] - q[j] + par.eta, par.tau) < guard) ok = false;
        if (ok) return z;
    }
    throw sampler_exhausted_error("sample_spectral: rejection limit reached");
}

RSState canonical_shift(const RSState& s, cplx c1, const ModelParams& par, const LatticeGuard& g) {
    const Modulus m = par.modulus();
    const int N = s.particles();
    RSState out = s;
    for (int j = 0; j < N; ++j) {
        cplx acc{0.0};
        for (int k = 0; k < N; ++k) {
            if (k == j) continue;
            const cplx d = s.q[j] - s.q[k];
            require_off_lattice(d + par.eta, m, g, "canonical_shift");
            require_off_lattice(d - par.eta, m, g, "canonical_shift");
            acc += std::log(theta(d + par.eta, m) / theta(d - par.eta, m));
        }
        out.p[j] += c1 * acc;
    }
    return out;
}

std::vector<cplx> tilde_p(const RSState& s, const ModelParams& par, const LatticeGuard& g) {
    return tilde_p<cplx>(s.p, s.q, par.nu, par.modulus(), g);
}

namespace {

nlohmann::ordered_json cplx_to_json(const cplx& z) { return {z.real(), z.imag()}; }

cplx cplx_from_json(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

nlohmann::ordered_json params_to_json(const ModelParams& par) {
    nlohmann::ordered_json j;
    j["tau"] = cplx_to_json(par.tau);
    j["eta"] = cplx_to_json(par.eta);
    j["c"] = cplx_to_json(par.c);
    j["nu"] = cplx_to_json(par.nu);
    j["k"] = cplx_to_json(par.k);
    j["N"] = par.N;
    j["n"] = par.n;
    return j;
}

}  // namespace

std::string rs_state_to_json(const RSState& s, const ModelParams& par, std::uint64_t seed) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json p = nlohmann::ordered_json::array();
    nlohmann::ordered_json q = nlohmann::ordered_json::array();
    for (const auto& x : s.p) p.push_back(cplx_to_json(x));
    for (const auto& x : s.q) q.push_back(cplx_to_json(x));
    j["p"] = std::move(p);
    j["q"] = std::move(q);
    j["params"] = params_to_json(par);
    j["seed"] = seed;
    return j.dump();
}

RSState rs_state_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    RSState s;
    for (const auto& x : j.at("p")) s.p.push_back(cplx_from_json(x));
    for (const auto& x : j.at("q")) s.q.push_back(cplx_from_json(x));
    return s;
}

std::string chain_state_to_json(const ChainState& s, const ModelParams& par, std::uint64_t seed) {
    nlohmann::ordered_json j;
    auto site_block = [&](const std::vector<cplx>& flat) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (int a = 0; a < s.sites; ++a) {
            nlohmann::ordered_json row = nlohmann::ordered_json::array();
            for (int i = 0; i < s.particles_per_site; ++i)
                row.push_back(cplx_to_json(flat[std::size_t(a) * s.particles_per_site + i]));
            arr.push_back(row);
        }
        return arr;
    };
    j["p"] = site_block(s.p);
    j["q"] = site_block(s.q);
    j["params"] = params_to_json(par);
    j["seed"] = seed;
    return j.dump();
}

ChainState chain_state_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ChainState s;
    s.sites = int(j.at("p").size());
    s.particles_per_site = s.sites ? int(j.at("p").at(0).size()) : 0;
    for (const auto& row : j.at("p"))
        for (const auto& x : row) s.p.push_back(cplx_from_json(x));
    for (const auto& row : j.at("q"))
        for (const auto& x : row) s.q.push_back(cplx_from_json(x));
    return s;
}

}  // namespace elax
