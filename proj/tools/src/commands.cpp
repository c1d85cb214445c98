#include "metallic_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "metallic/connections.hpp"
#include "metallic/errors.hpp"
#include "metallic/foliation.hpp"
#include "metallic/forms.hpp"
#include "metallic/norden.hpp"
#include "metallic_cli/report.hpp"
#include "metallic_cli/spec_file.hpp"

namespace metallic::cli {

namespace {

class BranchError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

void require_branch(const ManifoldSpec& spec, bool real, const std::string& command) {
  const double disc = spec.p * spec.p + 4 * spec.q;
  if (real && !(disc > 0))
    throw BranchError(command + " requires the real branch p^2+4q > 0; " + spec.name +
                      " has p^2+4q = " + format4(disc) + (disc < 0 ? " (use norden or forms)" : ""));
  if (!real && !(disc < 0))
    throw BranchError(command + " requires the Norden branch p^2+4q < 0; " + spec.name +
                      " has p^2+4q = " + format4(disc));
}

void require_structure(const ManifoldSpec& spec) {
  if (!spec.has_structure())
    throw SpecError(spec.source, 1, 1, "no [metric]/[endomorphism] sections");
}

double rel(const Vec& a, const Vec& b) {
  if (a.size() == 0) return 0;
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

double crel(const CVec& a, const CVec& b) {
  if (a.size() == 0) return 0;
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

double inf_norm(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

VectorField coord(int n, int i) { return VectorField::coordinate(n, i); }

struct Context {
  ManifoldSpec spec;
  Options opt;
  int samples = 50;
  std::uint64_t seed = 0;
  std::vector<Point> pts;

  std::string at(const std::string& op) const { return op + " @ " + spec.name; }
};

Report make_report(const std::string& command, const Context& c) {
  Report r(command, c.spec.name, c.spec.digest);
  r.setting("samples", std::to_string(c.pts.size()));
  r.setting("seed", std::to_string(c.seed));
  r.setting("tol", format4(c.opt.tol));
  return r;
}

Report cmd_validate(const Context& c) {
  require_structure(c.spec);
  const Structure s = c.spec.structure();
  const ValidationReport v = validate(s.g, s.J, s.params, c.pts, c.opt.tol);
  Report r = make_report("validate", c);
  const std::string loc = c.at("metallic_core.validate");
  r.check("J^2 - pJ - qI", v.metallic_residual, c.opt.tol, loc);
  r.check("gJ - (gJ)^T", v.symmetry_residual, c.opt.tol, loc);
  r.info("p^2 + 4q", v.disc, loc);
  r.fact("metric indefinite", v.indefinite, loc);
  r.require("p^2+4q < 0 needs an indefinite metric", v.signature_ok, loc);
  r.fact("g-skew J", v.skew, loc, v.skew_residual);
  r.require("g-skew J forces p = 0", v.skew_consistent, loc);
  return r;
}

Report cmd_tensors(const Context& c) {
  require_structure(c.spec);
  const Structure s = c.spec.structure();
  const int n = s.dim();
  Report r = make_report("tensors", c);
  const std::string loc = c.at("metallic_core.assoc_tensor");
  double nj = 0, mj = 0, hj = 0, two_h = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const VectorField x = coord(n, i), y = coord(n, j);
      const VectorField N = nijenhuis(s.J, x, y);
      const VectorField M = jordan_tensor(s.lc, s.J, x, y);
      const VectorField H = deformation_hj(s.lc, s.J, x, y);
      for (const Point& pt : c.pts) {
        Evaluator ev(pt);
        const Vec a = N.at(ev), b = M.at(ev), h = H.at(ev);
        nj = std::max(nj, inf_norm(a));
        mj = std::max(mj, inf_norm(b));
        hj = std::max(hj, inf_norm(h));
        two_h = std::max(two_h, rel(2.0 * h, a + b));
      }
    }
  r.info("max |N_J|", nj, loc);
  r.info("max |M_J|", mj, loc);
  r.info("max |H_J|", hj, loc);
  r.check("2H_J = N_J + M_J", two_h, c.opt.tol, loc);

  const double disc = s.params.disc();
  if (disc > 0) {
    const std::string dloc = c.at("metallic_core.deformation_suite");
    double sum = 0, sum_printed = 0, hc = 0, hpc = 0, lc = 0, lpc = 0, kc = 0, kpc = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (const Point& pt : c.pts) {
          const DeformationSuite d = deformation_suite(s, coord(n, i), coord(n, j), pt);
          sum = std::max(sum, rel(d.H + d.Hp, -d.HJ_over_disc));
          sum_printed = std::max(sum_printed, rel(d.H + d.Hp, d.HJ_over_disc));
          hc = std::max(hc, rel(d.H_closed, d.H));
          hpc = std::max(hpc, rel(d.Hp_closed, d.Hp));
          lc = std::max(lc, rel(d.L_closed, d.L));
          lpc = std::max(lpc, rel(d.Lp_closed, d.Lp));
          kc = std::max(kc, rel(d.K_closed, d.K));
          kpc = std::max(kpc, rel(d.Kp_closed, d.Kp));
        }
    r.check("H + H' = -H_J/disc", sum, c.opt.tol, dloc);
    r.fact("H + H' = +H_J/disc as printed", sum_printed < c.opt.tol, dloc, sum_printed, c.opt.tol);
    r.check("H closed form", hc, c.opt.tol, dloc);
    r.check("H' closed form", hpc, c.opt.tol, dloc);
    r.check("L closed form", lc, c.opt.tol, dloc);
    r.check("L' closed form", lpc, c.opt.tol, dloc);
    r.check("K closed form", kc, c.opt.tol, dloc);
    r.check("K' closed form", kpc, c.opt.tol, dloc);

    const std::string ploc = c.at("metallic_core.almost_product");
    const EndoField jp = almost_product(s.J, s.params);
    const ProjectorFields pr = projector_fields(s.J, s.params);
    double nscale = 0, mscale = 0, np = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const VectorField x = coord(n, i), y = coord(n, j);
        const VectorField N = nijenhuis(s.J, x, y), Np = nijenhuis(jp, x, y);
        const VectorField M = jordan_tensor(s.lc, s.J, x, y), Mp = jordan_tensor(s.lc, jp, x, y);
        const VectorField NP = nijenhuis(pr.P, x, y);
        for (const Point& pt : c.pts) {
          Evaluator ev(pt);
          const Vec nv = N.at(ev);
          nscale = std::max(nscale, rel(nv, disc / 4 * Np.at(ev)));
          mscale = std::max(mscale, rel(M.at(ev), disc / 4 * Mp.at(ev)));
          np = std::max(np, rel(NP.at(ev), nv / disc));
        }
      }
    r.check("N_J = (disc/4) N_{J_p}", nscale, c.opt.tol, ploc);
    r.check("M_J = (disc/4) M_{J_p}", mscale, c.opt.tol, ploc);
    r.check("N_P = N_J/disc", np, c.opt.tol, c.at("metallic_core.projectors"));
  }
  return r;
}

Report cmd_connections(const Context& c) {
  require_structure(c.spec);
  require_branch(c.spec, true, "connections");
  const Structure s = c.spec.structure();
  const int n = s.dim();
  const double disc = s.params.disc();
  Report r = make_report("connections", c);
  const Connection svk = schouten_van_kampen(s);
  const Connection svk_c = schouten_van_kampen_closed(s);
  const Connection vr = vranceanu(s.lc, s.J, s.params);
  const Connection vi = vidal(s);

  double svk_routes = 0, svk_g = 0, svk_j = 0, vr_vi = 0, vi_t = 0, vi_j = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const VectorField x = coord(n, i), y = coord(n, j);
      const VectorField a = svk(x, y), b = svk_c(x, y), v1 = vr(x, y), v2 = vi(x, y);
      const VectorField sj = nabla_endo(svk, s.J, x, y), vj = nabla_endo(vi, s.J, x, y);
      const VectorField t = torsion(vi, x, y), nj = Expr(1.0 / disc) * nijenhuis(s.J, x, y);
      for (const Point& pt : c.pts) {
        Evaluator ev(pt);
        svk_routes = std::max(svk_routes, rel(a.at(ev), b.at(ev)));
        vr_vi = std::max(vr_vi, rel(v1.at(ev), v2.at(ev)));
        svk_j = std::max(svk_j, inf_norm(sj.at(ev)));
        vi_j = std::max(vi_j, inf_norm(vj.at(ev)));
        vi_t = std::max(vi_t, rel(t.at(ev), nj.at(ev)));
      }
      for (int k = 0; k < n; ++k) {
        const Expr m = nabla_metric(svk, s.g, x, y, coord(n, k));
        for (const Point& pt : c.pts) svk_g = std::max(svk_g, std::abs(eval(m, pt)));
      }
    }
  const std::string cloc = c.at("adapted_connections");
  r.check("Schouten-van Kampen projector = closed form", svk_routes, c.opt.tol,
          cloc + ".schouten_van_kampen");
  r.check("Schouten-van Kampen nabla g = 0", svk_g, c.opt.tol, cloc + ".schouten_van_kampen");
  r.check("Schouten-van Kampen nabla J = 0", svk_j, c.opt.tol, cloc + ".schouten_van_kampen");
  r.check("Vranceanu(Levi-Civita) = Vidal", vr_vi, c.opt.tol, cloc + ".vranceanu");
  r.check("Vidal nabla J = 0", vi_j, c.opt.tol, cloc + ".vidal");
  r.check("Vidal torsion = N_J/disc", vi_t, c.opt.tol, cloc + ".vidal");

  double direct = 0, f1 = 0, f2 = 0, f2c = 0;
  double kc = 0, kb = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k)
        for (const Point& pt : c.pts) {
          const MetricityDefect m =
              vidal_metricity_defect(s, coord(n, i), coord(n, j), coord(n, k), pt);
          const double scale = std::max(1.0, std::abs(m.direct));
          direct = std::max(direct, std::abs(m.direct));
          f1 = std::max(f1, std::abs(m.form_nabla_jy - m.direct) / scale);
          f2 = std::max(f2, std::abs(m.form_mj - m.direct) / scale);
          f2c = std::max(f2c, std::abs(m.form_mj_corrected - m.direct) / scale);
        }
      for (const Point& pt : c.pts) {
        const KirichenkoTensors t = oneill_gray_kirichenko(s, coord(n, i), coord(n, j), pt);
        kc = std::max(kc, rel(t.C, t.C_from_TA));
        kb = std::max(kb, rel(t.B, t.B_from_TA));
      }
    }
  r.info("max |Vidal nabla g|", direct, cloc + ".vidal_metricity_defect");
  r.check("Vidal metricity, nabla_{JY} J form", f1, c.opt.tol, cloc + ".vidal_metricity_defect");
  r.fact("Vidal metricity, M_J form as printed", f2 < c.opt.tol, cloc + ".vidal_metricity_defect",
         f2, c.opt.tol);
  r.check("Vidal metricity, M_J form corrected", f2c, c.opt.tol, cloc + ".vidal_metricity_defect");
  r.check("C = 2[T(X,P'Y) + A(X,PY)]", kc, c.opt.tol, cloc + ".oneill_gray_kirichenko");
  r.check("B = -2[T(X,PY) + A(X,P'Y)]", kb, c.opt.tol, cloc + ".oneill_gray_kirichenko");
  return r;
}

void add_verdict(Report& r, const std::string& side, const char* property,
                 const DistributionVerdict& v, double tol, const std::string& loc,
                 const char* tensor) {
  r.info(side + " rank", v.rank, loc);
  r.fact(side + " " + property, v.holds(), loc, v.projection_defect, tol);
  r.info(side + " " + tensor + " eigen-defect", v.eigen_defect, loc);
  r.info(side + " connection criterion defect", v.remark_defect, loc);
  r.require(side + " " + property + " criteria agree", v.agree(), loc);
}

Report cmd_foliate(const Context& c) {
  require_structure(c.spec);
  require_branch(c.spec, true, "foliate");
  const Structure s = c.spec.structure();
  Report r = make_report("foliate", c);
  const FoliationReport in = integrability_report(s, c.pts, c.opt.tol);
  const FoliationReport gi = geodesic_invariance_report(s, c.pts, c.opt.tol);
  const std::string l1 = c.at("foliation_analysis.integrability_report");
  const std::string l2 = c.at("foliation_analysis.geodesic_invariance_report");
  add_verdict(r, "D", "integrable", in.d, c.opt.tol, l1, "N_J");
  add_verdict(r, "D'", "integrable", in.dp, c.opt.tol, l1, "N_J");
  add_verdict(r, "D", "geodesically invariant", gi.d, c.opt.tol, l2, "M_J");
  add_verdict(r, "D'", "geodesically invariant", gi.dp, c.opt.tol, l2, "M_J");
  return r;
}

Report cmd_chen(const Context& c) {
  require_structure(c.spec);
  if (!c.opt.a || !c.opt.b || !c.opt.c) throw UsageError("chen needs --a, --b and --c");
  require_branch(c.spec, true, "chen");
  const Structure s = c.spec.structure();
  const Point& pt = c.pts.front();
  const ChenReport ch = chen_report(s, *c.opt.a, *c.opt.b, *c.opt.c, pt, c.opt.tol);
  Report r = make_report("chen", c);
  r.setting("a", format4(*c.opt.a));
  r.setting("b", format4(*c.opt.b));
  r.setting("c", format4(*c.opt.c));
  std::ostringstream ps;
  for (std::size_t i = 0; i < pt.size(); ++i) ps << (i ? "," : "") << format4(pt[i]);
  r.setting("point", "(" + ps.str() + ")");
  const std::string loc = c.at("foliation_analysis.chen_report");
  r.info("leaf dimension n", ch.n, loc);
  r.info("tau^D", ch.tau, loc);
  r.info("inf K^D", ch.inf_k.value, loc);
  r.fact("inf K^D certified by sampling", ch.inf_k.certified, loc, ch.inf_k.sampled_min);
  r.info("delta_D", ch.delta, loc);
  r.info("|H|^2", ch.h_mean_sq, loc);
  r.info("|h|^2", ch.h_norm_sq, loc);
  r.fact("q a^2 - p a b - b^2 = 1", ch.constraint_residual < c.opt.tol, loc,
         ch.constraint_residual, c.opt.tol);
  r.fact("ambient curvature of the required form", ch.e3_residual < 1e-6, loc, ch.e3_residual, 1e-6);
  r.fact("D integrable (h symmetric)", ch.h_asymmetry < 1e-7, loc, ch.h_asymmetry, 1e-7);
  r.check("2 tau expansion", ch.two_tau_residual, 1e-6, loc);
  r.info("lhs delta_D", ch.lhs, loc);
  r.info("rhs", ch.rhs, loc);
  r.require("Chen inequality", ch.holds, loc, ch.rhs - ch.lhs);
  return r;
}

Report cmd_norden(const Context& c) {
  require_structure(c.spec);
  require_branch(c.spec, false, "norden");
  const Structure s = c.spec.structure();
  const int n = s.dim();
  const double disc = s.params.disc();
  Report r = make_report("norden", c);
  const EndoField jc = norden_jc(s.J, s.params);
  double sq = 0, nscale = 0, conj = 0, sum = 0, vt = 0;
  for (const Point& pt : c.pts) {
    const Mat m = jc.at(pt);
    sq = std::max(sq, (m * m + Mat::Identity(n, n)).cwiseAbs().maxCoeff());
    const ComplexProjectorPair pp = complex_projectors(s.J, s.params, pt);
    conj = std::max(conj, (pp.Pp - pp.P.conjugate()).cwiseAbs().maxCoeff());
    sum = std::max(sum, (pp.P + pp.Pp - CMat::Identity(n, n)).cwiseAbs().maxCoeff());
  }
  const ComplexConnection vid = complex_connection(ComplexKind::Vidal, s);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const VectorField x = coord(n, i), y = coord(n, j);
      const VectorField a = nijenhuis(jc, x, y), b = nijenhuis(s.J, x, y);
      const ComplexVectorField cx(x), cy(y);
      const ComplexVectorField t = torsion(vid, cx, cy), nc = nijenhuis(s.J, cx, cy);
      for (const Point& pt : c.pts) {
        Evaluator ev(pt);
        nscale = std::max(nscale, rel(a.at(ev), 4.0 / -disc * b.at(ev)));
        vt = std::max(vt, crel(t.at(pt), nc.at(pt) / disc));
      }
    }
  const std::string loc = c.at("norden_complex");
  r.check("J_c^2 = -I", sq, c.opt.tol, loc + ".norden_jc");
  r.check("N_{J_c} = 4/(-disc) N_J", nscale, c.opt.tol, loc + ".norden_jc");
  r.check("P^C' = conj(P^C)", conj, c.opt.tol, loc + ".complex_projectors");
  r.check("P^C + P^C' = I", sum, c.opt.tol, loc + ".complex_projectors");
  r.check("complex Vidal torsion = N_J/disc", vt, c.opt.tol, loc + ".complex_connection");
  const ComplexInvarianceReport inv = complex_invariance_report(s, c.pts, c.opt.tol);
  const std::string iloc = loc + ".complex_invariance_report";
  r.fact("D^C integrable", inv.integrable(), iloc, inv.frobenius, c.opt.tol);
  r.fact("D^C geodesically invariant", inv.geodesically_invariant(), iloc, inv.jordan, c.opt.tol);
  r.info("max |N_J|", inv.nijenhuis, iloc);
  r.info("max |M_J|", inv.jordan_tensor, iloc);
  r.require("integrability criteria agree", inv.integrability_agrees(), iloc);
  r.require("geodesic invariance criteria agree", inv.geodesic_agrees(), iloc);
  return r;
}

std::string mask_name(FormField::Mask m) {
  if (m == 0) return "1";
  std::string s;
  for (int i = 0; m; ++i, m >>= 1)
    if (m & 1u) s += (s.empty() ? "dx" : "^dx") + std::to_string(i + 1);
  return s;
}

Report cmd_forms(const Context& c) {
  require_structure(c.spec);
  require_branch(c.spec, false, "forms");
  if (c.spec.forms.empty()) throw SpecError(c.spec.source, 1, 1, "forms needs [form] sections");
  const auto conv = parse_convention(c.opt.convention);
  if (!conv) throw UsageError("unknown convention '" + c.opt.convention + "'");
  const Structure s = c.spec.structure();
  const FormContext ctx(s, c.pts.front(), *conv);
  Report r = make_report("forms", c);
  r.setting("convention", convention_name(*conv));

  if (!c.opt.op.empty()) {
    const auto kind = parse_operator(c.opt.op);
    if (!kind) throw UsageError("unknown operator '" + c.opt.op + "'");
    r.setting("operator", operator_name(*kind));
    const std::string loc = c.at(std::string("form_calculus.apply_operator"));
    for (std::size_t k = 0; k < c.spec.forms.size(); ++k) {
      const ComplexForm out = apply_operator(*kind, ctx, c.spec.forms[k].form);
      const auto masks = masks_of_degree(ctx.dim(), out.re.degree());
      const Point& pt = c.pts.front();
      const Vec re = out.re.at(pt), im = out.im.at(pt);
      const std::string name = std::string(operator_name(*kind)) + "(form " + std::to_string(k + 1) + ")";
      for (std::size_t m = 0; m < masks.size(); ++m) {
        r.info(name + " re " + mask_name(masks[m]), re(static_cast<Eigen::Index>(m)), loc);
        r.info(name + " im " + mask_name(masks[m]), im(static_cast<Eigen::Index>(m)), loc);
      }
    }
    return r;
  }

  std::vector<FormField> forms;
  for (const FormEntry& f : c.spec.forms) {
    forms.push_back(f.form.re);
    if (!f.form.im.terms().empty()) forms.push_back(f.form.im);
  }
  std::optional<Torus> torus;
  if (c.spec.all_periodic()) torus = Torus{c.spec.lo, c.spec.hi, 64};
  r.setting("torus", torus ? "64" : "none");
  const ConformanceTable t = identity_conformance(ctx, forms, c.pts, torus, c.opt.tol);
  const std::string loc = c.at("form_calculus.identity_conformance");
  for (const ConformanceRow& row : t.rows) {
    if (row.evaluations == 0)
      r.fact(row.identity + " (needs a periodic chart)", false, loc);
    else
      r.check(row.identity, row.residual, c.opt.tol, loc);
  }
  const std::string hloc = c.at("form_calculus.harmonic_check");
  for (std::size_t k = 0; k < forms.size(); ++k) {
    const HarmonicReport h = harmonic_check(ctx, forms[k], c.pts, c.opt.tol);
    const std::string name = "form " + std::to_string(k + 1);
    r.fact(name + " J-harmonic", h.j_harmonic(), hloc, h.laplace_c, c.opt.tol);
    r.fact(name + " harmonic", h.laplace < c.opt.tol, hloc, h.laplace, c.opt.tol);
    r.fact(name + " J-harmonic implies J*_c a harmonic", h.implication_holds(), hloc);
    r.fact(name + " J-harmonic iff d^c and delta^c closed", h.equivalence_holds(), hloc);
  }
  return r;
}

Report cmd_map(const Context& c) {
  require_structure(c.spec);
  if (c.opt.target.empty() || c.opt.map.empty()) throw UsageError("map needs --target and --map");
  const ManifoldSpec target = load_spec(c.opt.target);
  require_structure(target);
  const ManifoldSpec mapfile = load_spec(c.opt.map);
  if (mapfile.map.empty()) throw SpecError(mapfile.source, 1, 1, "no [map] section");
  if (mapfile.dim != c.spec.dim)
    throw SpecError(mapfile.source, 1, 1, "map source dimension differs from the source spec");
  if (static_cast<int>(mapfile.map.size()) != target.dim)
    throw SpecError(mapfile.source, 1, 1, "map has " + std::to_string(mapfile.map.size()) +
                                              " components, target dimension is " +
                                              std::to_string(target.dim));
  const Structure s1 = c.spec.structure();
  const Structure s2 = target.structure();
  const MapSpec phi = MapSpec::parse(mapfile.map, c.spec.dim);
  Report r(std::string("map"), c.spec.name + " -> " + target.name,
           fnv1a_hex(c.spec.digest + target.digest + mapfile.digest));
  r.setting("samples", std::to_string(c.pts.size()));
  r.setting("seed", std::to_string(c.seed));
  r.setting("tol", format4(c.opt.tol));
  const std::string loc = c.at("foliation_analysis.metallic_map_report");
  const MapReport m = metallic_map_report(phi, s1.J, s2.J, s1.params, s2.params, c.pts);
  r.check("dPhi J1 = J2 dPhi", m.metallic_residual, c.opt.tol, loc);
  r.check("dPhi J1^3 = J2^3 dPhi", m.odd_power_residual[0], c.opt.tol, loc);
  r.check("dPhi J1^5 = J2^5 dPhi", m.odd_power_residual[1], c.opt.tol, loc);
  r.check("L(TM1) in ker dPhi", m.containment_residual, c.opt.tol, loc);
  if (s1.params.disc() > 0 && s2.params.disc() > 0) {
    const std::string lloc = c.at("foliation_analysis.leaf_correspondence_check");
    const LeafCorrespondence lc =
        leaf_correspondence_check(phi, s1.J, s1.params, s2.params, c.pts, &s2.J);
    r.info("dim ker dPhi", lc.kernel_dim, lloc);
    r.fact("rank of dPhi varies", lc.rank_varies, lloc);
    r.check("Phi^* D2 = D1", lc.pullback_distance, c.opt.tol, lloc);
    r.check("{v : dPhi v in D2} = D1", lc.direct_distance, c.opt.tol, lloc);
    r.fact("ker dPhi = (J1 - s2_- I)(D1)", lc.condition_holds(), lloc, lc.condition_distance,
           lc.tolerance);
    r.fact("ker dPhi = (J1 - s2_+ I)(D1') as printed", lc.condition_printed_holds(), lloc,
           lc.condition_printed_distance, lc.tolerance);
    r.fact("{v : (J1 - s2_+ I)v in ker dPhi} = D1 as printed",
           lc.pullback_printed_distance < lc.tolerance, lloc, lc.pullback_printed_distance,
           lc.tolerance);
  }
  return r;
}

}  // namespace

Outcome run_command(const std::string& command, const std::string& spec_path, const Options& opt) {
  Outcome o;
  try {
    using Fn = std::function<Report(const Context&)>;
    const std::vector<std::pair<std::string, Fn>> table = {
        {"validate", cmd_validate}, {"tensors", cmd_tensors}, {"connections", cmd_connections},
        {"foliate", cmd_foliate},   {"chen", cmd_chen},       {"norden", cmd_norden},
        {"forms", cmd_forms},       {"map", cmd_map}};
    const Fn* fn = nullptr;
    for (const auto& [name, f] : table)
      if (name == command) fn = &f;
    if (!fn) throw UsageError("unknown command '" + command + "'");
    if (!(opt.tol > 0)) throw UsageError("--tol must be positive");

    Context c;
    c.spec = load_spec(spec_path);
    c.opt = opt;
    c.samples = opt.samples.value_or(c.spec.samples);
    c.seed = opt.seed.value_or(c.spec.seed);
    if (c.samples < 1) throw UsageError("--samples must be positive");
    c.pts = c.spec.sample_points(c.samples, c.seed);
    const Report r = (*fn)(c);
    o.out = opt.json ? r.json() : r.text();
    o.exit = r.exit_code();
  } catch (const UsageError& e) {
    o.err = std::string("error: ") + e.what() + "\n";
    o.exit = kParseError;
  } catch (const ParseError& e) {
    o.err = std::string("parse error: ") + e.what() + "\n";
    o.exit = kParseError;
  } catch (const BranchError& e) {
    o.err = std::string("wrong branch: ") + e.what() + "\n";
    o.exit = kWrongBranch;
  } catch (const Error& e) {
    o.err = std::string("numeric failure: ") + e.what() + "\n";
    o.exit = kNumericFailure;
  } catch (const std::exception& e) {
    o.err = std::string("internal error: ") + e.what() + "\n";
    o.exit = kNumericFailure;
  }
  return o;
}

}  // namespace metallic::cli
