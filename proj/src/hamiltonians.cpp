#include "optomech/hamiltonians.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "optomech/spectrum.hpp"
#include "optomech/symmetrize.hpp"

namespace optomech {
namespace {

using cd = std::complex<double>;
const cd kI(0.0, 1.0);

template <typename E>
struct Names {
  std::vector<std::pair<E, const char*>> entries;
  std::string name(E e) const {
    for (const auto& [v, n] : entries)
      if (v == e) return n;
    return "unknown";
  }
  E parse(const std::string& s, const char* what) const {
    for (const auto& [v, n] : entries)
      if (s == n) return v;
    std::string expected;
    for (const auto& [v, n] : entries) expected += (expected.empty() ? "" : "|") + std::string(n);
    throw UnknownVariantError("unknown " + std::string(what) + " '" + s + "' (expected " + expected + ")");
  }
};

const Names<HamiltonianVariant> kVariantNames{{
    {HamiltonianVariant::new_full, "new_full"},
    {HamiltonianVariant::law_full, "law_full"},
    {HamiltonianVariant::H012, "H012"},
    {HamiltonianVariant::H3, "H3"},
    {HamiltonianVariant::H4, "H4"},
    {HamiltonianVariant::H5, "H5"},
    {HamiltonianVariant::H4_linear_optical, "H4_linear_optical"},
    {HamiltonianVariant::H3_linear_optical, "H3_linear_optical"},
    {HamiltonianVariant::H4_linear_mechanical, "H4_linear_mechanical"},
    {HamiltonianVariant::H4_special_eta, "H4_special_eta"},
    {HamiltonianVariant::H4_bogoliubov_form, "H4_bogoliubov_form"},
    {HamiltonianVariant::delta_relativistic, "delta_relativistic"},
}};

const Names<Branch> kBranchNames{{
    {Branch::full, "full"},
    {Branch::omega_large, "omega_large"},
    {Branch::omega_small, "omega_small"},
}};

const Names<FieldQuadraticCoefficient> kQuadraticNames{{
    {FieldQuadraticCoefficient::taylor, "taylor"},
    {FieldQuadraticCoefficient::printed, "printed"},
}};

const Names<RelativisticPart> kRelativisticNames{{
    {RelativisticPart::total, "total"},
    {RelativisticPart::first, "first"},
    {RelativisticPart::second, "second"},
}};

const Names<SpecialEtaForm> kEtaFormNames{{
    {SpecialEtaForm::literal, "literal"},
    {SpecialEtaForm::rederived, "rederived"},
}};

bool wants_large(Branch b) { return b != Branch::omega_small; }
bool wants_small(Branch b) { return b != Branch::omega_large; }

ComplexMatrix power(const ComplexMatrix& m, int n) {
  ComplexMatrix out = ComplexMatrix::Identity(m.rows(), m.cols());
  for (int i = 0; i < n; ++i) out = out * m;
  return out;
}

// Polynomials in each subsystem are formed on padded bases, then cut back
// and tensored together.
class Builder {
 public:
  Builder(const FockSpace& space, int pad) : space_(space), mech_(space.n_mech, pad), opt_(space.n_opt, pad) {}

  const PaddedMode& mech() const { return mech_; }
  const PaddedMode& opt() const { return opt_; }

  ComplexMatrix term(const ComplexMatrix& mech_poly, const ComplexMatrix& opt_poly) const {
    return tensor(space_, mech_.compress(mech_poly), {opt_.compress(opt_poly)});
  }
  ComplexMatrix term(const ComplexMatrix& mech_poly, const std::vector<ComplexMatrix>& opt_polys) const {
    std::vector<ComplexMatrix> cut;
    for (const auto& p : opt_polys) cut.push_back(opt_.compress(p));
    return tensor(space_, mech_.compress(mech_poly), cut);
  }
  ComplexMatrix zero() const { return ComplexMatrix::Zero(space_.dim(), space_.dim()); }

  // P_mech^2 + X^2, P^2 + Q^2 and friends on the padded bases.
  ComplexMatrix Pm2() const { return mech_.momentum() * mech_.momentum(); }
  ComplexMatrix X(int n = 1) const { return power(mech_.position(), n); }
  ComplexMatrix P2() const { return opt_.momentum() * opt_.momentum(); }
  ComplexMatrix Q2() const { return opt_.position() * opt_.position(); }
  ComplexMatrix opt_sum() const { return P2() + Q2(); }
  ComplexMatrix bsum() const { return mech_.adag() + mech_.a(); }
  ComplexMatrix bdiff() const { return mech_.adag() - mech_.a(); }
  ComplexMatrix asum() const { return opt_.adag() + opt_.a(); }
  ComplexMatrix aphase(double phi) const { return std::polar(1.0, phi) * opt_.adag() + std::polar(1.0, -phi) * opt_.a(); }

  // S{P_mech^2 X^n} over the padded mechanical basis.
  ComplexMatrix sym_p2_xn(int n) const {
    OperatorWord word{{"P", mech_.momentum()}, {"P", mech_.momentum()}};
    for (int i = 0; i < n; ++i) word.push_back({"X", mech_.position()});
    return symmetrize(word);
  }

 private:
  FockSpace space_;
  PaddedMode mech_;
  PaddedMode opt_;
};

struct Context {
  const CavityParams& p;
  const HamiltonianOptions& o;
  BaseRates base;
  Builder bld;

  Context(const CavityParams& params, const FockSpace& space, const HamiltonianOptions& options)
      : p(params), o(options), base(base_rates(params, RateOptions{options.r_convention, false})), bld(space, options.pad) {}
};

ComplexMatrix build_h012(const Context& c) {
  const auto& b = c.bld;
  return 0.5 * c.p.hbar * c.p.omega_mech * b.term(b.Pm2() + b.X(2), b.opt().identity()) +
         0.5 * c.p.hbar * c.p.omega_opt * b.term(b.mech().identity(), b.opt_sum());
}

ComplexMatrix build_h3(const Context& c) {
  return -0.5 * c.p.hbar * c.base.alpha * c.bld.term(c.bld.X(), c.bld.opt_sum());
}

ComplexMatrix build_h4(const Context& c) {
  const auto& p = c.p;
  const auto& b = c.bld;
  const double c4 = p.hbar * p.hbar / (2.0 * p.length * p.length * p.mass);
  ComplexMatrix h = b.zero();
  if (wants_small(c.o.branch)) h += -c4 * c.base.R * (p.omega_mech / p.omega_opt) * b.term(b.Pm2(), b.Q2());
  if (wants_large(c.o.branch)) h += c4 * (p.omega_opt / p.omega_mech) * b.term(b.X(2), b.opt_sum());
  return h;
}

ComplexMatrix build_h5(const Context& c) {
  const auto& p = c.p;
  const auto& b = c.bld;
  const double c5 = std::pow(p.hbar, 2.5) / (2.0 * std::pow(p.mass, 1.5) * std::pow(p.length, 3) * std::sqrt(p.omega_mech));
  ComplexMatrix h = b.zero();
  if (wants_small(c.o.branch))
    h += 2.0 * c5 * c.base.R * (p.omega_mech / p.omega_opt) * b.term(b.sym_p2_xn(1), b.Q2());
  if (wants_large(c.o.branch)) h += -c5 * (p.omega_opt / p.omega_mech) * b.term(b.X(3), b.opt_sum());
  return h;
}

ComplexMatrix build_law_full(const Context& c) {
  const auto& p = c.p;
  const auto& b = c.bld;
  // P^2 carries omega(q) = omega (1 + x/l)^-1; Q^2 carries omega^2(q) times
  // the dressing 1/omega(q), i.e. (1 + x/l)^-2 (1 + x/l).
  const std::vector<double> pc = expand_inverse_power(1.0, c.o.order);
  std::vector<double> w2 = expand_inverse_power(2.0, c.o.order);
  if (c.o.order >= 2 && c.o.field_quadratic == FieldQuadraticCoefficient::printed) w2[2] = 4.0;
  ComplexMatrix h = 0.5 * p.hbar * p.omega_mech * b.term(b.Pm2() + b.X(2), b.opt().identity());
  for (int i = 0; i <= c.o.order; ++i) {
    const double qc = w2[i] + (i > 0 ? w2[i - 1] : 0.0);
    const double scale = 0.5 * p.hbar * p.omega_opt * std::pow(c.base.theta, i);
    h += scale * b.term(b.X(i), pc[i] * b.P2() + qc * b.Q2());
  }
  return h;
}

// -(r hbar / (8 m^2 l^2 omega)) sum_i e_i S{p^2 (x/l)^i} Q^2 with p^2 = hbar m Omega P_mech^2.
ComplexMatrix build_r_term(const Context& c) {
  const auto& p = c.p;
  const auto& b = c.bld;
  const double r = 4.0 * c.base.R;
  const std::vector<double> e = expand_inverse_power(2.0, c.o.order);
  const double pref = -r * p.hbar / (8.0 * p.mass * p.mass * p.length * p.length * p.omega_opt) *
                      (p.hbar * p.mass * p.omega_mech);
  ComplexMatrix mech = ComplexMatrix::Zero(b.mech().padded_size(), b.mech().padded_size());
  for (int i = 0; i <= c.o.order; ++i) mech += e[i] * std::pow(c.base.theta, i) * b.sym_p2_xn(i);
  return pref * b.term(mech, b.Q2());
}

ComplexMatrix build_h3_linear(const Context& c) {
  const LinearizedRates lr = linearized_rates(c.p, c.base);
  return -c.p.hbar * lr.g3 * c.bld.term(c.bld.bsum(), c.bld.aphase(c.p.abar_phase));
}

ComplexMatrix build_h4_linear_optical(const Context& c) {
  const LinearizedRates lr = linearized_rates(c.p, c.base);
  const auto& b = c.bld;
  ComplexMatrix h = b.zero();
  if (wants_large(c.o.branch)) h += c.p.hbar * lr.g4_plus * b.term(power(b.bsum(), 2), b.aphase(c.p.abar_phase));
  if (wants_small(c.o.branch)) h += c.p.hbar * lr.g4_minus * b.term(power(b.bdiff(), 2), b.asum());
  return h;
}

ComplexMatrix build_h4_linear_mechanical(const Context& c) {
  const LinearizedRates lr = linearized_rates(c.p, c.base);
  const auto& b = c.bld;
  ComplexMatrix h = b.zero();
  if (wants_large(c.o.branch)) h += c.p.hbar * lr.G4_plus * b.term(b.bsum(), b.aphase(c.p.abar_phase));
  // The i makes (b^+ - b)(a^+ + a) Hermitian.
  if (wants_small(c.o.branch)) h += kI * c.p.hbar * lr.G4_minus * b.term(b.bdiff(), b.asum());
  return h;
}

ComplexMatrix build_bogoliubov_form(const Context& c, const FockSpace& space) {
  const LinearizedRates lr = linearized_rates(c.p, c.base);
  const double ratio = c.p.omega_mech / c.p.omega_opt;
  const double Gp = 2.0 * c.p.bbar_mag * lr.g4_plus;
  const double Gm = c.base.R * ratio * ratio * Gp;
  const double G = std::sqrt(Gp * Gm);
  if (G == 0.0) return c.bld.zero();
  const SqueezeParameters sq = squeeze_parameters(c.p, Gp, Gm, RateOptions{c.o.r_convention, false});
  const BogoliubovPair pair = bogoliubov_pair(sq.rho_arctanh, space);
  const ComplexMatrix a = embed_opt(space, annihilation(space.n_opt));
  const ComplexMatrix ab = a * pair.B.adjoint();
  return c.p.hbar * G * (ab + ab.adjoint());
}

ComplexMatrix build_special_eta(const CavityParams& params, const FockSpace& space, const HamiltonianOptions& o) {
  CavityParams p = params;
  p.omega_opt = special_case_frequency(o.eta, params, RateOptions{o.r_convention, false});
  const Context c(p, space, o);
  const auto& b = c.bld;
  const double phi = p.abar_phase;
  const double eta = o.eta;
  const ComplexMatrix pairs = b.mech().adag() * b.mech().adag() + b.mech().a() * b.mech().a();
  const ComplexMatrix& m = b.mech().number();
  if (o.special_eta_form == SpecialEtaForm::literal) {
    const ComplexMatrix plus = b.aphase(phi);
    const ComplexMatrix minus = b.aphase(-phi);
    const ComplexMatrix inner = (1.0 / (2.0 * eta)) * b.term(pairs, minus) + (1.0 + 1.0 / (2.0 * eta)) * b.term(m, plus) +
                                b.term(pairs, plus) - (1.0 / eta) * b.term(m, minus);
    return 2.0 * p.hbar * c.base.beta * p.abar_mag * inner;
  }
  // First order in the optical fluctuation of (hbar beta/2)[-(1/eta) P_mech^2 Q^2 + X^2 (P^2 + Q^2)].
  const ComplexMatrix q2_lin = 2.0 * std::cos(phi) * b.asum();
  const ComplexMatrix n_lin = 2.0 * b.aphase(phi);
  const ComplexMatrix inner = -(1.0 / eta) * b.term(b.Pm2(), q2_lin) + b.term(b.X(2), n_lin);
  return 0.5 * p.hbar * c.base.beta * p.abar_mag * inner;
}

ComplexMatrix build_relativistic(const Context& c, const FockSpace& space) {
  const auto& p = c.p;
  const auto& b = c.bld;
  const int modes = space.n_modes_opt;
  const ComplexMatrix bd2 = power(b.bdiff(), 2);
  const ComplexMatrix id = b.opt().identity();
  auto mode_pair = [&](int k, int j, const ComplexMatrix& fk, const ComplexMatrix& fj) {
    std::vector<ComplexMatrix> f(modes, id);
    if (k == j) {
      f[k] = fk * fj;
    } else {
      f[k] = fk;
      f[j] = fj;
    }
    return f;
  };
  ComplexMatrix h = b.zero();
  if (c.o.relativistic_part == RelativisticPart::total) {
    const RelativisticRates rr = relativistic_rates(p, modes);
    for (int k = 0; k < modes; ++k)
      for (int j = 0; j < modes; ++j) h += -p.hbar * rr.w(k, j) * b.term(bd2, mode_pair(k, j, b.asum(), b.asum()));
    return h;
  }
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double kappa = c.o.relativistic_part == RelativisticPart::first ? 2.0 * pi2 * p.d_mirror * p.chi0
                                                                        : -pi2 * p.d_mirror * p.chi0;
  // kappa/(m^2 l^3) p^2 sum_kj k j Q_k Q_j with p^2 = -(hbar m Omega/2)(b^+ - b)^2
  // and Q_k = sqrt(hbar/2 omega_k)(a_k^+ + a_k), omega_k = c pi k / l.
  const ComplexMatrix p2 = -(p.hbar * p.mass * p.omega_mech / 2.0) * bd2;
  const double pref = kappa / (p.mass * p.mass * std::pow(p.length, 3));
  for (int k = 1; k <= modes; ++k) {
    for (int j = 1; j <= modes; ++j) {
      const double wk = p.light_speed * std::numbers::pi * k / p.length;
      const double wj = p.light_speed * std::numbers::pi * j / p.length;
      const double amp = std::sqrt(p.hbar / (2.0 * wk)) * std::sqrt(p.hbar / (2.0 * wj));
      h += pref * k * j * amp * b.term(p2, mode_pair(k - 1, j - 1, b.asum(), b.asum()));
    }
  }
  return h;
}

}  // namespace

std::string to_string(HamiltonianVariant v) { return kVariantNames.name(v); }
HamiltonianVariant parse_variant(const std::string& name) { return kVariantNames.parse(name, "variant"); }

const std::vector<HamiltonianVariant>& all_variants() {
  static const std::vector<HamiltonianVariant> v = [] {
    std::vector<HamiltonianVariant> out;
    for (const auto& [e, n] : kVariantNames.entries) out.push_back(e);
    return out;
  }();
  return v;
}

std::string to_string(Branch b) { return kBranchNames.name(b); }
Branch parse_branch(const std::string& name) { return kBranchNames.parse(name, "branch"); }
std::string to_string(FieldQuadraticCoefficient c) { return kQuadraticNames.name(c); }
FieldQuadraticCoefficient parse_field_quadratic(const std::string& name) {
  return kQuadraticNames.parse(name, "field quadratic coefficient");
}
std::string to_string(RelativisticPart p) { return kRelativisticNames.name(p); }
RelativisticPart parse_relativistic_part(const std::string& name) {
  return kRelativisticNames.parse(name, "relativistic part");
}
std::string to_string(SpecialEtaForm f) { return kEtaFormNames.name(f); }
SpecialEtaForm parse_special_eta_form(const std::string& name) { return kEtaFormNames.parse(name, "special eta form"); }

OperatorMatrix build_hamiltonian(HamiltonianVariant variant, const CavityParams& params, const FockSpace& space,
                                 const HamiltonianOptions& options) {
  params.validate();
  space.validate();
  if (options.order < 0 || options.order > 2) throw std::invalid_argument("expansion order must be 0, 1 or 2");
  if (options.pad < 4) throw std::invalid_argument("padding must be >= 4 levels");
  if (variant != HamiltonianVariant::delta_relativistic && space.n_modes_opt != 1)
    throw CutoffError(to_string(variant) + " is single optical mode only");
  OperatorMatrix out{space, {}};
  if (variant == HamiltonianVariant::H4_special_eta) {
    out.data = build_special_eta(params, space, options);
    return out;
  }
  const Context c(params, space, options);
  switch (variant) {
    case HamiltonianVariant::H012: out.data = build_h012(c); break;
    case HamiltonianVariant::H3: out.data = build_h3(c); break;
    case HamiltonianVariant::H4: out.data = build_h4(c); break;
    case HamiltonianVariant::H5: out.data = build_h5(c); break;
    case HamiltonianVariant::law_full: out.data = build_law_full(c); break;
    case HamiltonianVariant::new_full: out.data = build_law_full(c) + build_r_term(c); break;
    case HamiltonianVariant::H3_linear_optical: out.data = build_h3_linear(c); break;
    case HamiltonianVariant::H4_linear_optical: out.data = build_h4_linear_optical(c); break;
    case HamiltonianVariant::H4_linear_mechanical: out.data = build_h4_linear_mechanical(c); break;
    case HamiltonianVariant::H4_bogoliubov_form: out.data = build_bogoliubov_form(c, space); break;
    case HamiltonianVariant::delta_relativistic: out.data = build_relativistic(c, space); break;
    case HamiltonianVariant::H4_special_eta: break;
  }
  return out;
}

BogoliubovPair bogoliubov_pair(std::complex<double> rho, const FockSpace& space) {
  space.validate();
  const ComplexMatrix a = embed_opt(space, annihilation(space.n_opt));
  const ComplexMatrix b = embed_mech(space, annihilation(space.n_mech));
  const cd ch = std::cosh(rho), sh = std::sinh(rho);
  return {a.adjoint() * sh + a * ch, b.adjoint() * ch + b * sh};
}

SquaredAnnihilator squared_annihilator(const FockSpace& space) {
  space.validate();
  if (space.n_mech < 4) throw CutoffError("squared annihilator needs n_mech >= 4");
  const ComplexMatrix b = embed_mech(space, annihilation(space.n_mech));
  SquaredAnnihilator out;
  out.c = 0.5 * b * b;
  out.commutator = commutator(out.c, out.c.adjoint());
  return out;
}

GroundStateComparison compare_ground_states(const CavityParams& params, const FockSpace& space,
                                            const HamiltonianOptions& options) {
  const OperatorMatrix hn = build_hamiltonian(HamiltonianVariant::new_full, params, space, options);
  const OperatorMatrix hl = build_hamiltonian(HamiltonianVariant::law_full, params, space, options);
  GroundStateComparison g;
  g.e0_new = spectrum(hn.data, 1).eigenvalues(0);
  g.e0_law = spectrum(hl.data, 1).eigenvalues(0);
  g.exact_shift = g.e0_new - g.e0_law;
  g.first_order = (hn.data(0, 0) - hl.data(0, 0)).real();
  g.relative_error = std::abs(g.exact_shift - g.first_order) / std::abs(g.first_order);
  return g;
}

}  // namespace optomech
