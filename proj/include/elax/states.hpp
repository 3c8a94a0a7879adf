#ifndef ELAX_STATES_HPP
#define ELAX_STATES_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "elax/elliptic.hpp"
#include "elax/scalars.hpp"

namespace elax {

/// Model constants shared across the builders. eta is the relativistic
/// deformation, c the relativistic constant, nu the Calogero-Moser coupling,
/// k the field-theory derivative coupling; N counts particles and n chain
/// sites.
struct ModelParams {
    cplx tau{0.0, 1.0};
    cplx eta{0.23, 0.14};
    cplx c{1.9, -0.3};
    cplx nu{0.31, -0.09};
    cplx k{0.35, 0.10};
    int N = 2;
    int n = 1;

    Modulus modulus() const { return Modulus{tau}; }
};

/// One-site phase space: N momenta and N positions.
struct RSState {
    std::vector<cplx> p;
    std::vector<cplx> q;
    int particles() const { return int(p.size()); }
};

/// n-site chain phase space, flattened so coordinate (a,i) sits at a*N+i.
struct ChainState {
    int sites = 0;
    int particles_per_site = 0;
    std::vector<cplx> p;
    std::vector<cplx> q;

    cplx& pa(int a, int i) { return p[std::size_t(a) * particles_per_site + i]; }
    cplx& qa(int a, int i) { return q[std::size_t(a) * particles_per_site + i]; }
    const cplx& pa(int a, int i) const { return p[std::size_t(a) * particles_per_site + i]; }
    const cplx& qa(int a, int i) const { return q[std::size_t(a) * particles_per_site + i]; }
};

/// Weight conventions generated by the canonical momentum shifts: the
/// defining product with theta(q-q-eta), the shift-by-c image with
/// theta(q-q+eta), and the square-root form evaluated through
/// (wp(eta) - wp(q_j - q_k))^{1/2} with principal roots.
enum class WeightVariant { standard, plus_eta, square_root };

/// Fully specified deterministic generator (mt19937_64 with explicit
/// bit-to-double conversion, so streams are identical across platforms).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }
    cplx in_cell(cplx tau) { return uniform() + uniform() * tau; }
    cplx in_unit_disk() {
        const double r = std::sqrt(uniform());
        const double phi = 2.0 * pi * uniform();
        return {r * std::cos(phi), r * std::sin(phi)};
    }

  private:
    std::mt19937_64 eng_;
};

constexpr double default_state_guard = 0.05;
constexpr int sampler_max_rejections = 1000;

bool rs_state_ok(const RSState& s, const ModelParams& par, double guard);
bool chain_state_ok(const ChainState& s, const ModelParams& par, double guard);

/// Positions uniform in the fundamental cell subject to the pairwise and
/// eta-shifted separation guards; momenta uniform in the unit disk.
RSState sample_rs(std::uint64_t seed, const ModelParams& par, double guard = default_state_guard);
ChainState sample_chain(std::uint64_t seed, const ModelParams& par, double guard = default_state_guard);

/// Spectral parameter away from the lattice and from the model's shifted
/// pole loci (z + q_i - q_j + eta for the Lax matrices).
cplx sample_spectral(Rng& rng, const std::vector<cplx>& q, const ModelParams& par, double guard);

/// p_j -> p_j + c1 log prod_{k != j} theta(q_j - q_k + eta)/theta(q_j - q_k - eta).
RSState canonical_shift(const RSState& s, cplx c1, const ModelParams& par, const LatticeGuard& g = {});

/// p~_j = p_j - nu sum_{k != j} E1(q_j - q_k).
template <class S>
std::vector<S> tilde_p(const std::vector<S>& p, const std::vector<S>& q, cplx nu, const Modulus& m,
                       const LatticeGuard& g = {}) {
    const int N = int(p.size());
    std::vector<S> out(p);
    for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) {
            if (k == j) continue;
            out[j] -= S{nu} * e1(q[j] - q[k], m, g);
        }
    return out;
}

std::vector<cplx> tilde_p(const RSState& s, const ModelParams& par, const LatticeGuard& g = {});

std::string rs_state_to_json(const RSState& s, const ModelParams& par, std::uint64_t seed);
RSState rs_state_from_json(const std::string& text);
std::string chain_state_to_json(const ChainState& s, const ModelParams& par, std::uint64_t seed);
ChainState chain_state_from_json(const std::string& text);

}  // namespace elax

#endif
