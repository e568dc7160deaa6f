#pragma once

#include "mbasis/linalg.hpp"
#include "mbasis/norms.hpp"
#include "mbasis/report.hpp"

#include <utility>

namespace mbasis {

/// Weighted rank-two inner product on R^2,
///   <y|z> = t1 (y . xbar1)(z . xbar1) + t2 (y . xbar2)(z . xbar2),
/// together with the normalizing constants alpha1, alpha2 of the scaled
/// functionals S_i(x) = <x|x_i> / (alpha_i <x_i|x_i>).
struct R2Form {
  double t1 = 0.5;
  double t2 = 0.5;
  Functional xbar1;
  Functional xbar2;
  double alpha1 = 1.0;
  double alpha2 = 1.0;
};

/// Validated constructor: t1, t2 > 0 with t1 + t2 = 1 (1e-12), alphas > 0,
/// both generators two-dimensional.
R2Form make_r2_form(double t1, double t2, Functional xbar1, Functional xbar2, double alpha1 = 1.0,
                    double alpha2 = 1.0);

double r2_inner(const R2Form& form, const Vector& y, const Vector& z);

/// Gram matrix of the form; identical to kuelbs_gram({xbar1, xbar2}, {t1, t2}).
Mat r2_gram(const R2Form& form);

struct SFunctionals {
  Functional s1;
  Functional s2;
};

/// S_i(x) = <x|x_i> / (alpha_i <x_i|x_i>) using the form's alphas. Dual norms
/// are cached on the results. Throws DegenerateSystem when <x_i|x_i> = 0.
SFunctionals s_functionals(const NormSpec& space, const R2Form& form, const Vector& x1, const Vector& x2);

/// The closed forms S1(x) = (x . xbar1) / ||xbar1||, S2(x) = (x . xbar2) / ||x2||.
SFunctionals displayed_s_functionals(const NormSpec& space, const R2Form& form, const Vector& x2);

/// alpha_i = dual norm of x -> <x|x_i> / <x_i|x_i>, so that ||S_i||_* = 1.
/// The alphas stored in the form are ignored.
std::pair<double, double> choose_alpha(const NormSpec& space, const R2Form& form, const Vector& x1,
                                       const Vector& x2);

/// Audit of the two-dimensional worked example: x1 = (1,0), x2 = (1,1),
/// xbar1 = (1,-1), xbar2 = (0,1), Euclidean norm, t = (1/2, 1/2).
///
/// Checks products_sqrt2 and pairing_identity gate reproduction; every
/// other check records a reading of the example's S-functionals.
AuditReport euclidean_example_audit();

}  // namespace mbasis
