#include "flowspace/moore.hpp"

#include <vector>

#include "doctest.h"
#include "flowspace/rng.hpp"

using namespace flowspace;

namespace {

PLPath ramp(Rat from, Rat to) { return make_pl_path(1, {{0, from}, {1, to}}); }

// Random duration-1 path starting at the given value, with denominators kept
// small so every later computation stays readable in failure output.
PLPath random_unit_path(Rng& rng, Rat start) {
  int den = 2 + static_cast<int>(rng.below(7));
  std::vector<PLPoint> pts;
  pts.push_back({0, start});
  Rat y = start;
  std::vector<int> cuts;
  for (int i = 1; i < den; ++i) {
    if (rng.chance(1, 3)) cuts.push_back(i);
  }
  for (int c : cuts) {
    y += Rat(static_cast<int>(rng.below(9)) - 4, 1 + static_cast<int>(rng.below(3)));
    pts.push_back({Rat(c, den), y});
  }
  y += Rat(static_cast<int>(rng.below(9)) - 4, 1 + static_cast<int>(rng.below(3)));
  pts.push_back({1, y});
  return make_pl_path(1, std::move(pts));
}

PLPath random_path(Rng& rng, Rat start) {
  // Arbitrary positive duration via a final affine stretch.
  PLPath unit = random_unit_path(rng, start);
  Rat dur(1 + static_cast<int>(rng.below(5)), 1 + static_cast<int>(rng.below(3)));
  std::vector<PLPoint> pts;
  for (const PLPoint& p : unit.pts) pts.push_back({p.t * dur, p.y});
  return make_pl_path(dur, std::move(pts));
}

PLReparam random_reparam(Rng& rng) {
  int den = 2 + static_cast<int>(rng.below(6));
  std::vector<PLPoint> pts;
  pts.push_back({0, 0});
  // Strictly increasing values picked from the same grid.
  std::vector<int> ys;
  for (int i = 1; i < den; ++i) ys.push_back(i);
  int k = 0;
  for (int i = 1; i < den; ++i) {
    if (rng.chance(1, 2) && k < i) {
      // Leave room so the remaining values can still increase to 1.
      int lo = k;
      int hi = static_cast<int>(ys.size()) - (den - 1 - i);
      if (lo < hi) {
        k = lo + static_cast<int>(rng.below(hi - lo)) + 1;
        pts.push_back({Rat(i, den), Rat(ys[k - 1], den)});
      }
    }
  }
  pts.push_back({1, 1});
  return make_pl_reparam(std::move(pts));
}

}  // namespace

TEST_CASE("path construction validates and normalizes") {
  PLPath g = make_pl_path(2, {{0, 0}, {1, 1}, {2, 2}});
  // The interior breakpoint is collinear and gets dropped.
  CHECK(g.pts.size() == 2);
  CHECK(g == make_pl_path(2, {{0, 0}, {2, 2}}));

  CHECK_THROWS_AS(make_pl_path(0, {{0, 0}, {0, 1}}), InputError);
  CHECK_THROWS_AS(make_pl_path(1, {{0, 0}}), InputError);
  CHECK_THROWS_AS(make_pl_path(1, {{0, 0}, {2, 1}}), InputError);      // wrong last time
  CHECK_THROWS_AS(make_pl_path(1, {{Rat(1) / 2, 0}, {1, 1}}), InputError);  // wrong first time
  CHECK_THROWS_AS(make_pl_path(1, {{0, 0}, {0, 1}, {1, 0}}), InputError);   // stalled time

  CHECK(value_at(g, 1) == 1);
  CHECK(value_at(g, Rat(3) / 2) == Rat(3) / 2);
  CHECK_THROWS_AS(value_at(g, 3), PreconditionError);
  CHECK_THROWS_AS(value_at(g, -1), PreconditionError);
}

TEST_CASE("moore composition concatenates with added durations") {
  PLPath f = make_pl_path(1, {{0, 0}, {1, 1}});            // f(t) = t
  PLPath g = make_pl_path(1, {{0, 1}, {1, 3}});            // g(t) = 1 + 2t
  PLPath fg = moore_compose(f, g);
  CHECK(fg.duration == 2);
  CHECK(value_at(fg, Rat(3) / 2) == 2);
  CHECK(value_at(fg, Rat(1) / 2) == Rat(1) / 2);
  CHECK(fg.pts == std::vector<PLPoint>{{0, 0}, {1, 1}, {2, 3}});

  // Composing with a constant path appends a flat segment.
  PLPath rest = make_pl_path(3, {{0, 3}, {3, 3}});
  PLPath grest = moore_compose(g, rest);
  CHECK(grest.duration == 4);
  CHECK(grest.pts == std::vector<PLPoint>{{0, 1}, {1, 3}, {4, 3}});

  // Mismatched junction values are refused.
  CHECK_THROWS_AS(moore_compose(g, f), PreconditionError);

  // A collinear junction disappears from the breakpoint list.
  PLPath h = make_pl_path(1, {{0, 1}, {1, 2}});
  PLPath fh = moore_compose(f, h);
  CHECK(fh.pts == std::vector<PLPoint>{{0, 0}, {2, 2}});
}

TEST_CASE("moore composition is strictly associative on random triples") {
  Rng rng(0x300edau);
  for (int iter = 0; iter < 60; ++iter) {
    PLPath a = random_path(rng, Rat(static_cast<int>(rng.below(5)) - 2));
    PLPath b = random_path(rng, a.pts.back().y);
    PLPath c = random_path(rng, b.pts.back().y);
    PLPath lhs = moore_compose(moore_compose(a, b), c);
    PLPath rhs = moore_compose(a, moore_compose(b, c));
    REQUIRE(lhs == rhs);
  }
}

TEST_CASE("rescale maps onto duration 1 exactly") {
  PLPath g = make_pl_path(2, {{0, 0}, {2, 2}});
  PLPath r = rescale(g);
  CHECK(r.duration == 1);
  CHECK(r.pts == std::vector<PLPoint>{{0, 0}, {1, 2}});  // slope doubles

  PLPath unit = make_pl_path(1, {{0, 0}, {Rat(1) / 3, 2}, {1, 1}});
  CHECK(rescale(unit) == unit);

  Rng rng(0x5ca1eu);
  for (int iter = 0; iter < 20; ++iter) {
    PLPath a = random_path(rng, 0);
    PLPath b = random_path(rng, a.pts.back().y);
    PLPath s = rescale(moore_compose(a, b));
    CHECK(s.duration == 1);
    for (const PLPoint& p : s.pts) CHECK(value_at(s, p.t) == value_at(moore_compose(a, b), p.t * (a.duration + b.duration)));
  }
}

TEST_CASE("normalized composition traverses halves") {
  PLPath a = ramp(0, 1);
  PLPath b = ramp(1, 2);
  PLPath c = ramp(2, 3);
  PLPath ab = normalized_compose(a, b);
  CHECK(ab.duration == 1);
  CHECK(value_at(ab, Rat(1) / 2) == 1);
  CHECK(value_at(ab, Rat(1) / 4) == Rat(1) / 2);

  // Left-nested traversal puts a on [0, 1/4].
  PLPath abc = normalized_compose(ab, c);
  CHECK(value_at(abc, Rat(1) / 4) == 1);
  CHECK(value_at(abc, Rat(1) / 8) == Rat(1) / 2);
  CHECK(abc.pts.front().y == 0);
  CHECK(abc.pts.back().y == 3);

  PLPath longer = make_pl_path(2, {{0, 0}, {2, 1}});
  CHECK_THROWS_AS(normalized_compose(longer, b), PreconditionError);
  CHECK_THROWS_AS(normalized_compose(a, c), PreconditionError);
}

TEST_CASE("normalized composition is not associative and the associator repairs it") {
  PLPath a = ramp(0, 1);
  PLPath b = ramp(1, 2);
  PLPath c = ramp(2, 3);
  PLPath lhs = normalized_compose(normalized_compose(a, b), c);
  PLPath rhs = normalized_compose(a, normalized_compose(b, c));
  // Concrete witness of non-associativity. The left side crosses value 2 at
  // time 1/2, the right side only reaches 1 there; the slope-4 middle
  // segments merge with their collinear neighbours.
  CHECK(lhs.pts == std::vector<PLPoint>{{0, 0}, {Rat(1) / 2, 2}, {1, 3}});
  CHECK(rhs.pts == std::vector<PLPoint>{{0, 0}, {Rat(1) / 2, 1}, {1, 3}});
  CHECK_FALSE(lhs == rhs);
  CHECK(value_at(lhs, Rat(1) / 4) == 1);
  CHECK(value_at(rhs, Rat(1) / 2) == 1);

  PLReparam phi = associator(a, b, c);
  CHECK(reparam_at(phi, Rat(1) / 4) == Rat(1) / 2);
  CHECK(reparam_at(phi, Rat(1) / 2) == Rat(3) / 4);
  CHECK(act(rhs, phi) == lhs);

  // Degenerate triple: both sides already equal, the associator still checks out.
  PLPath konst = make_pl_path(1, {{0, 5}, {1, 5}});
  CHECK_NOTHROW(associator(konst, konst, konst));
  CHECK(normalized_compose(normalized_compose(konst, konst), konst) ==
        normalized_compose(konst, normalized_compose(konst, konst)));

  // Random composable triples: the fixed associator always works.
  Rng rng(0xa550cu);
  for (int iter = 0; iter < 50; ++iter) {
    PLPath x = random_unit_path(rng, 0);
    PLPath y = random_unit_path(rng, x.pts.back().y);
    PLPath z = random_unit_path(rng, y.pts.back().y);
    PLReparam w = associator(x, y, z);  // throws if the exact check fails
    CHECK(act(normalized_compose(x, normalized_compose(y, z)), w) ==
          normalized_compose(normalized_compose(x, y), z));
  }
}

TEST_CASE("blend is the pointwise barycenter and stays in the group") {
  PLReparam phi = make_pl_reparam({{0, 0}, {Rat(1) / 2, Rat(1) / 4}, {1, 1}});
  PLReparam id = identity_reparam();
  PLReparam half = blend(phi, id, Rat(1) / 2);
  CHECK(half.pts == std::vector<PLPoint>{{0, 0}, {Rat(1) / 2, Rat(3) / 8}, {1, 1}});

  CHECK(blend(phi, id, 0) == phi);
  CHECK(blend(phi, id, 1) == id);
  CHECK_THROWS_AS(blend(phi, id, 2), InputError);
  CHECK_THROWS_AS(blend(phi, id, Rat(-1) / 2), InputError);

  Rng rng(0xb1e2du);
  for (int iter = 0; iter < 100; ++iter) {
    PLReparam x = random_reparam(rng);
    PLReparam y = random_reparam(rng);
    Rat s(static_cast<int>(rng.below(5)), 4);
    PLReparam z = blend(x, y, s);  // construction validates the invariants
    CHECK(z.pts.front().t == 0);
    CHECK(z.pts.back().t == 1);
    for (size_t i = 1; i < z.pts.size(); ++i) CHECK(z.pts[i - 1].y < z.pts[i].y);
  }
}

TEST_CASE("reparametrizations act on paths and form a group") {
  Rng rng(0x9209bu);
  PLReparam id = identity_reparam();
  for (int iter = 0; iter < 50; ++iter) {
    PLPath g = random_unit_path(rng, Rat(static_cast<int>(rng.below(5)) - 2));
    PLReparam phi = random_reparam(rng);
    PLReparam psi = random_reparam(rng);

    CHECK(act(g, id) == g);
    // Action law and endpoint preservation.
    CHECK(act(act(g, phi), psi) == act(g, compose_reparam(phi, psi)));
    CHECK(act(g, phi).pts.front().y == g.pts.front().y);
    CHECK(act(g, phi).pts.back().y == g.pts.back().y);

    // Group laws, all exact.
    CHECK(compose_reparam(phi, id) == phi);
    CHECK(compose_reparam(id, phi) == phi);
    CHECK(compose_reparam(phi, invert_reparam(phi)) == id);
    CHECK(compose_reparam(invert_reparam(phi), phi) == id);
    PLReparam chi = random_reparam(rng);
    CHECK(compose_reparam(compose_reparam(phi, psi), chi) ==
          compose_reparam(phi, compose_reparam(psi, chi)));
  }

  PLReparam swap = make_pl_reparam({{0, 0}, {Rat(1) / 4, Rat(1) / 2}, {1, 1}});
  CHECK(invert_reparam(swap).pts == std::vector<PLPoint>{{0, 0}, {Rat(1) / 2, Rat(1) / 4}, {1, 1}});
  CHECK(invert_reparam(id) == id);
}

TEST_CASE("path literals parse and print round-trip") {
  PLPath g = parse_pl_path("dur=3/2; pts=(0,0),(1/2,1),(3/2,-1)");
  CHECK(g.duration == Rat(3) / 2);
  CHECK(g.pts == std::vector<PLPoint>{{0, 0}, {Rat(1) / 2, 1}, {Rat(3) / 2, -1}});
  CHECK(format_pl_path(g) == "dur=3/2; pts=(0,0),(1/2,1),(3/2,-1)");
  CHECK(parse_pl_path(format_pl_path(g)) == g);

  // Whitespace tolerance and integer rationals.
  CHECK(parse_pl_path(" dur=2 ; pts= (0, 1), (2, 1) ") == make_pl_path(2, {{0, 1}, {2, 1}}));

  CHECK_THROWS_AS(parse_pl_path("pts=(0,0),(1,1)"), InputError);
  CHECK_THROWS_AS(parse_pl_path("dur=1; pts=(0,0),(1,1"), InputError);
  CHECK_THROWS_AS(parse_pl_path("dur=1; pts=(0,0),(x,1)"), InputError);
  CHECK_THROWS_AS(parse_pl_path("dur=1/0; pts=(0,0),(1,1)"), InputError);
  CHECK_THROWS_AS(parse_pl_path("dur=1; pts=(0,0)"), InputError);

  CHECK(format_pl_reparam(identity_reparam()) == "pts=(0,0),(1,1)");

  Rng rng(0x0f03a7u);
  for (int iter = 0; iter < 40; ++iter) {
    PLPath p = random_path(rng, Rat(static_cast<int>(rng.below(7)) - 3));
    CHECK(parse_pl_path(format_pl_path(p)) == p);
  }
}
