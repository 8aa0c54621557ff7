#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "flowspace/errors.hpp"

namespace flowspace {

using Rat = boost::multiprecision::cpp_rational;

struct PLPoint {
  Rat t;
  Rat y;
  bool operator==(const PLPoint&) const = default;
};

// Piecewise-linear path [0, duration] -> Q with exact rational breakpoints.
// Always normalized: time coordinates strictly increase from 0 to duration
// and no interior breakpoint is collinear with its neighbours, so equality
// of paths is plain list equality.
struct PLPath {
  Rat duration;
  std::vector<PLPoint> pts;
  bool operator==(const PLPath&) const = default;
};

// Piecewise-linear homeomorphism of [0,1] fixing the endpoints, i.e. a
// strictly increasing PL bijection. Same normalization convention.
struct PLReparam {
  std::vector<PLPoint> pts;
  bool operator==(const PLReparam&) const = default;
};

// Validating constructors; both throw InputError and normalize away
// collinear interior breakpoints.
PLPath make_pl_path(Rat duration, std::vector<PLPoint> pts);
PLReparam make_pl_reparam(std::vector<PLPoint> pts);
PLReparam identity_reparam();

// Exact evaluation by linear interpolation; t outside the domain throws
// PreconditionError.
Rat value_at(const PLPath& g, const Rat& t);
Rat reparam_at(const PLReparam& phi, const Rat& t);

// Concatenation with added durations; requires g1(l1) = g2(0). Strictly
// associative on the nose.
PLPath moore_compose(const PLPath& g1, const PLPath& g2);

// Affine reparametrization onto [0,1]: the result at t is g at duration*t.
PLPath rescale(const PLPath& g);

// Both arguments must have duration 1 and matching junction values; g1 is
// traversed on [0,1/2] and g2 on [1/2,1]. Associative only up to
// reparametrization.
PLPath normalized_compose(const PLPath& g1, const PLPath& g2);

// The fixed reparametrization with breakpoints (0,0), (1/4,1/2), (1/2,3/4),
// (1,1), verified exactly against the given composable triple:
//   (a . b) . c = (a . (b . c)) o phi   for the normalized composition.
PLReparam associator(const PLPath& a, const PLPath& b, const PLPath& c);

// Pointwise barycenter (1-s)*phi + s*psi; s must lie in [0,1]. Convexity
// keeps the result strictly increasing with fixed endpoints.
PLReparam blend(const PLReparam& phi, const PLReparam& psi, const Rat& s);

// g o phi for a duration-1 path; endpoints are preserved.
PLPath act(const PLPath& g, const PLReparam& phi);

// phi o psi and the inverse homeomorphism (coordinate swap).
PLReparam compose_reparam(const PLReparam& phi, const PLReparam& psi);
PLReparam invert_reparam(const PLReparam& phi);

// Text form `dur=<rat>; pts=(t0,y0),(t1,y1),...` with rationals as `p/q`.
PLPath parse_pl_path(const std::string& text);
std::string format_pl_path(const PLPath& g);
std::string format_pl_reparam(const PLReparam& phi);

}  // namespace flowspace
