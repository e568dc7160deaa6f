#include "mbasis/r2.hpp"

#include "mbasis/biortho.hpp"
#include "mbasis/error.hpp"

#include <cmath>

namespace mbasis {
namespace {

void check_r2(const Vector& v, const char* what) {
  if (v.dim() != 2) throw DimensionMismatch(what, 2, v.dim());
}

Functional cached(const NormSpec& space, Vec coords) { return with_dual_norm(space, Functional(std::move(coords))); }

}  // namespace

R2Form make_r2_form(double t1, double t2, Functional xbar1, Functional xbar2, double alpha1, double alpha2) {
  if (!(t1 > 0.0) || !(t2 > 0.0)) throw InvalidArgument("R2Form: weights must be positive");
  if (std::abs(t1 + t2 - 1.0) > 1e-12) throw InvalidArgument("R2Form: weights must sum to 1");
  if (!(alpha1 > 0.0) || !(alpha2 > 0.0) || !std::isfinite(alpha1) || !std::isfinite(alpha2))
    throw InvalidArgument("R2Form: alphas must be finite and positive");
  if (xbar1.dim() != 2) throw DimensionMismatch("R2Form xbar1", 2, xbar1.dim());
  if (xbar2.dim() != 2) throw DimensionMismatch("R2Form xbar2", 2, xbar2.dim());
  return R2Form{t1, t2, std::move(xbar1), std::move(xbar2), alpha1, alpha2};
}

double r2_inner(const R2Form& form, const Vector& y, const Vector& z) {
  check_r2(y, "r2_inner");
  check_r2(z, "r2_inner");
  return form.t1 * form.xbar1(y) * form.xbar1(z) + form.t2 * form.xbar2(y) * form.xbar2(z);
}

Mat r2_gram(const R2Form& form) {
  return form.t1 * form.xbar1.coords * form.xbar1.coords.transpose() +
         form.t2 * form.xbar2.coords * form.xbar2.coords.transpose();
}

SFunctionals s_functionals(const NormSpec& space, const R2Form& form, const Vector& x1, const Vector& x2) {
  if (space.dim() != 2) throw DimensionMismatch("s_functionals space", 2, space.dim());
  check_r2(x1, "s_functionals");
  check_r2(x2, "s_functionals");
  if (form.xbar1.coords.isZero(0.0) || form.xbar2.coords.isZero(0.0))
    throw DegenerateSystem("s_functionals: generating functionals must be nonzero");
  const Mat g = r2_gram(form);
  const double d1 = r2_inner(form, x1, x1);
  const double d2 = r2_inner(form, x2, x2);
  if (d1 <= 1e-14 * x1.coords.squaredNorm() || d2 <= 1e-14 * x2.coords.squaredNorm())
    throw DegenerateSystem("s_functionals: <x_i|x_i> vanishes");
  return {cached(space, g * x1.coords / (form.alpha1 * d1)), cached(space, g * x2.coords / (form.alpha2 * d2))};
}

SFunctionals displayed_s_functionals(const NormSpec& space, const R2Form& form, const Vector& x2) {
  if (space.dim() != 2) throw DimensionMismatch("displayed_s_functionals space", 2, space.dim());
  check_r2(x2, "displayed_s_functionals");
  const double n1 = norm(space, Vector(form.xbar1.coords));
  const double n2 = norm(space, x2);
  if (n1 == 0.0 || n2 == 0.0) throw DegenerateSystem("displayed_s_functionals: zero normalizer");
  return {cached(space, form.xbar1.coords / n1), cached(space, form.xbar2.coords / n2)};
}

std::pair<double, double> choose_alpha(const NormSpec& space, const R2Form& form, const Vector& x1,
                                       const Vector& x2) {
  R2Form unit = form;
  unit.alpha1 = 1.0;
  unit.alpha2 = 1.0;
  const SFunctionals s = s_functionals(space, unit, x1, x2);
  return {*s.s1.dual_norm_cache, *s.s2.dual_norm_cache};
}

AuditReport euclidean_example_audit() {
  const NormSpec l2 = NormSpec::pnorm(2, 2.0);
  const Vector x1{1.0, 0.0};
  const Vector x2{1.0, 1.0};
  const R2Form form = make_r2_form(0.5, 0.5, Functional{1.0, -1.0}, Functional{0.0, 1.0});
  const double rt2 = std::sqrt(2.0);

  AuditReport rep("example12");

  // Euclidean pairs {x_i, (., xbar_i)}.
  const BiorthogonalSystem euclid =
      make_biorthogonal_system(SystemOfVectors{l2, {x1, x2}}, {form.xbar1, form.xbar2});
  const AuditReport base = audit_products(euclid, 1e-12);
  rep.rows = base.rows;
  rep.pairing = euclid.pairing;
  rep.set_metric("product_1", euclid.products(0));
  rep.set_metric("product_2", euclid.products(1));
  rep.set_metric("pairing_defect", euclid.defect());
  rep.set_check("products_sqrt2",
                std::abs(euclid.products(0) - rt2) <= 1e-12 && std::abs(euclid.products(1) - rt2) <= 1e-12);
  rep.set_check("pairing_identity", euclid.defect() <= 1e-12);
  rep.set_check("fundamental", base.check("fundamental"));
  rep.set_check("minimal", base.check("minimal"));
  rep.set_check("total", base.check("total"));

  // Displayed closed forms.
  const SFunctionals shown = displayed_s_functionals(l2, form, x2);
  const double p1 = *shown.s1.dual_norm_cache * norm(l2, x1);
  const double p2 = *shown.s2.dual_norm_cache * norm(l2, x2);
  rep.set_metric("displayed_S1_norm", *shown.s1.dual_norm_cache);
  rep.set_metric("displayed_S2_norm", *shown.s2.dual_norm_cache);
  rep.set_metric("displayed_S1_product", p1);
  rep.set_metric("displayed_S2_product", p2);
  rep.set_metric("displayed_S1(x1)", shown.s1(x1));
  rep.set_metric("displayed_S2(x2)", shown.s2(x2));
  rep.set_metric("displayed_S1(x2)", shown.s1(x2));
  rep.set_metric("displayed_S2(x1)", shown.s2(x1));
  rep.set_check("displayed_products_one", std::abs(p1 - 1.0) <= 1e-9 && std::abs(p2 - 1.0) <= 1e-9);
  rep.set_check("displayed_cross_zero", std::abs(shown.s1(x2)) <= 1e-12 && std::abs(shown.s2(x1)) <= 1e-12);
  const bool unit_values = std::abs(shown.s1(x1) - 1.0) <= 1e-12 && std::abs(shown.s2(x2) - 1.0) <= 1e-12;
  rep.set_check("displayed_values_unit", unit_values);
  if (!unit_values)
    rep.add_finding("displayed S-functionals give S1(x1) = " + format_double(shown.s1(x1)) +
                    " and S2(x2) = " + format_double(shown.s2(x2)) +
                    ", not the S_i(x_i) = 1 stated alongside them");

  // General form with alpha selected for unit dual norm.
  const auto [a1, a2] = choose_alpha(l2, form, x1, x2);
  R2Form normed = form;
  normed.alpha1 = a1;
  normed.alpha2 = a2;
  const SFunctionals gen = s_functionals(l2, normed, x1, x2);
  rep.set_metric("chosen_alpha1", a1);
  rep.set_metric("chosen_alpha2", a2);
  rep.set_metric("chosen_S1(x1)", gen.s1(x1));
  rep.set_metric("chosen_S2(x2)", gen.s2(x2));
  rep.set_metric("chosen_S1_product", *gen.s1.dual_norm_cache * norm(l2, x1));
  rep.set_metric("chosen_S2_product", *gen.s2.dual_norm_cache * norm(l2, x2));

  // General form with the stated choice alpha1 = 1, alpha2 = ||x2||.
  R2Form stated = form;
  stated.alpha1 = 1.0;
  stated.alpha2 = norm(l2, x2);
  const SFunctionals st = s_functionals(l2, stated, x1, x2);
  const double sp1 = *st.s1.dual_norm_cache * norm(l2, x1);
  const double sp2 = *st.s2.dual_norm_cache * norm(l2, x2);
  rep.set_metric("stated_alpha_S1(x1)", st.s1(x1));
  rep.set_metric("stated_alpha_S2(x2)", st.s2(x2));
  rep.set_metric("stated_alpha_S1_product", sp1);
  rep.set_metric("stated_alpha_S2_product", sp2);
  const bool stated_one = std::abs(sp1 - 1.0) <= 1e-9 && std::abs(sp2 - 1.0) <= 1e-9;
  rep.set_check("stated_alpha_products_one", stated_one);
  if (!stated_one)
    rep.add_finding("with alpha1 = 1 and alpha2 = ||x2|| the general form gives products " + format_double(sp1) +
                    " and " + format_double(sp2) + "; alpha1 = 1 does not reproduce S1(x) = (x . xbar1)/||xbar1||");

  // Biorthogonal functionals are unique here, so rescaling F_i to reach
  // ||F_i|| ||x_i|| = 1 necessarily moves F_i(x_i) away from 1.
  const Mat inv = euclid.system.matrix().inverse();
  rep.set_metric("unique_functional_deviation",
                 (inv - rows_of(std::span<const Functional>(euclid.functionals))).cwiseAbs().maxCoeff());
  const double r1 = euclid.pairing(0, 0) / euclid.products(0);
  const double r2 = euclid.pairing(1, 1) / euclid.products(1);
  rep.set_metric("product_rescaled_F1(x1)", r1);
  rep.set_metric("product_rescaled_F2(x2)", r2);
  rep.add_finding("biorthogonal functionals of {x1, x2} are unique; rescaling them to product one gives F_i(x_i) = " +
                  format_double(r1) + ", " + format_double(r2));
  return rep;
}

}  // namespace mbasis
