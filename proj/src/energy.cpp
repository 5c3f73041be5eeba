#include "ringbind/energy.hpp"

#include <cmath>
#include <cstdio>

#include "ringbind/logsumexp.hpp"

namespace ringbind {

namespace {

std::string triple(double lo, double mid, double hi) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.6g < %.6g < %.6g", lo, mid, hi);
  return buf;
}

CooperativityCheck ordered(std::string label, double lo, double mid, double hi) {
  return CooperativityCheck{std::move(label), lo < mid && mid < hi, triple(lo, mid, hi)};
}

}  // namespace

ReducedParams reduce_params(const RawParams& raw) {
  validate(raw);
  ReducedParams out;
  const double shift = raw.epsilon + raw.gamma1;
  for (int i = 0; i < 3; ++i) {
    out.alpha_hat[i] = raw.alpha[i] - shift;
    out.beta_hat[i] = raw.beta[i] - shift;
  }
  out.gamma0 = raw.gamma0;
  return out;
}

Bath bath_from_conc(double atp_uM, double n0, const LatticeSpec& spec) {
  if (!(atp_uM > 0) || !std::isfinite(atp_uM))
    throw BathError("concentration must be positive, got " + std::to_string(atp_uM) + " uM");
  if (!(n0 > 0) || !std::isfinite(n0))
    throw BathError("n0 must be positive, got " + std::to_string(n0));
  const double n_total = n0 * atp_uM / 5.0;
  if (n_total <= spec.total_sites())
    throw BathError("bath of " + std::to_string(n_total) + " ligands at " +
                    std::to_string(atp_uM) + " uM cannot cover " +
                    std::to_string(spec.total_sites()) + " sites with a free remainder");
  return Bath{atp_uM, n_total, n0};
}

void validate(const ReducedParams& p) {
  for (int i = 0; i < 3; ++i)
    if (!std::isfinite(p.alpha_hat[i]) || !std::isfinite(p.beta_hat[i]))
      throw ParamError("site parameters must be finite");
  if (!std::isfinite(p.gamma0)) throw ParamError("gamma0 must be finite");
}

void validate(const RawParams& p) {
  for (int i = 0; i < 3; ++i)
    if (!std::isfinite(p.alpha[i]) || !std::isfinite(p.beta[i]))
      throw ParamError("site parameters must be finite");
  if (!std::isfinite(p.gamma0) || !std::isfinite(p.gamma1) || !std::isfinite(p.epsilon))
    throw ParamError("gamma0, gamma1 and epsilon must be finite");
}

double site_potential(int ring_neighbors, bool mirror_bound, const ReducedParams& p) {
  if (ring_neighbors < 0 || ring_neighbors > 2)
    throw IndexError("a site has 0..2 bound in-ring neighbors, got " +
                     std::to_string(ring_neighbors));
  return mirror_bound ? p.beta_hat[ring_neighbors] : p.alpha_hat[ring_neighbors];
}

double signature_energy(const NeighborSignature& sig, const ReducedParams& p) {
  double e = 0;
  for (int i = 0; i < 3; ++i) {
    e += sig.mirror_empty[i] * p.alpha_hat[i];
    e += sig.mirror_bound[i] * p.beta_hat[i];
  }
  return e;
}

double state_energy_reduced(MicroState s, const ReducedParams& p, const Bath& bath,
                            const LatticeSpec& spec) {
  validate(p);
  const int n = bound_count(s);
  if (n >= bath.n_total) return kPosInf;
  return signature_energy(neighbor_signature(s, spec), p) +
         p.gamma0 * std::log(bath.n_total - n);
}

double state_energy_full(MicroState s, const RawParams& p, const Bath& bath,
                         const LatticeSpec& spec) {
  validate(p);
  const int n = bound_count(s);
  if (n >= bath.n_total) return kPosInf;
  const NeighborSignature sig = neighbor_signature(s, spec);
  double e = 0;
  for (int i = 0; i < 3; ++i) {
    e += sig.mirror_empty[i] * p.alpha[i];
    e += sig.mirror_bound[i] * p.beta[i];
  }
  return e + p.gamma0 * std::log(bath.n_total - n) + p.gamma1 * (bath.n_total - n) +
         p.epsilon * (spec.total_sites() - n);
}

std::vector<CooperativityCheck> cooperativity_checks(const ReducedParams& p) {
  validate(p);
  const auto& a = p.alpha_hat;
  const auto& b = p.beta_hat;
  std::vector<CooperativityCheck> checks;

  checks.push_back(ordered("pair ranking: adjacent < mirror pair < scattered",
                           2 * a[1], 2 * b[0], 2 * a[0]));
  checks.push_back(ordered("triple ranking: arc of three < pair + mirror < pair + isolated",
                           2 * a[1] + a[2], a[1] + b[0] + b[1], 2 * a[1] + a[0]));
  for (int k = 4; k <= 8; ++k) {
    checks.push_back(ordered(
        "growth ranking (k=" + std::to_string(k) +
            "): full arc < arc + end mirror < arc + interior mirror",
        2 * a[1] + (k - 2) * a[2], a[1] + (k - 3) * a[2] + b[0] + b[1],
        2 * a[1] + (k - 4) * a[2] + b[0] + b[2]));
  }

  const auto flag = [&checks](std::string label, bool holds, std::string detail) {
    checks.push_back(CooperativityCheck{std::move(label), holds, std::move(detail)});
  };
  flag("in-ring energies fall with neighbor count", a[2] < a[1] && a[1] < a[0],
       triple(a[2], a[1], a[0]));
  flag("mirror-bound energies positive", b[0] > 0 && b[1] > 0 && b[2] > 0,
       "beta_hat = " + std::to_string(b[0]) + ", " + std::to_string(b[1]) + ", " +
           std::to_string(b[2]));
  flag("doubly-flanked binding favorable", a[2] < 0, "alpha_hat_2 = " + std::to_string(a[2]));
  flag("free-ligand entropy term attractive", p.gamma0 < 0,
       "gamma0 = " + std::to_string(p.gamma0));
  return checks;
}

}  // namespace ringbind
