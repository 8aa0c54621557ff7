#include "flowspace/moore.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace flowspace {

namespace {

std::string rat_str(const Rat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

// Drops interior points lying on the segment between their neighbours.
void drop_collinear(std::vector<PLPoint>& pts) {
  std::vector<PLPoint> out;
  for (const PLPoint& p : pts) {
    while (out.size() >= 2) {
      const PLPoint& a = out[out.size() - 2];
      const PLPoint& b = out.back();
      if ((b.y - a.y) * (p.t - b.t) == (p.y - b.y) * (b.t - a.t)) {
        out.pop_back();
      } else {
        break;
      }
    }
    out.push_back(p);
  }
  pts = std::move(out);
}

void check_times(const std::vector<PLPoint>& pts, const char* what) {
  if (pts.size() < 2) throw InputError(std::string(what) + ": need at least two breakpoints");
  for (size_t i = 1; i < pts.size(); ++i) {
    if (!(pts[i - 1].t < pts[i].t)) {
      throw InputError(std::string(what) + ": time coordinates must strictly increase, got " +
                       rat_str(pts[i - 1].t) + " then " + rat_str(pts[i].t));
    }
  }
}

Rat interpolate(const std::vector<PLPoint>& pts, const Rat& t) {
  // Binary search for the segment containing t; exact hits return the stored
  // value directly.
  size_t lo = 0, hi = pts.size() - 1;
  while (lo + 1 < hi) {
    size_t mid = (lo + hi) / 2;
    if (pts[mid].t <= t) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (t == pts[lo].t) return pts[lo].y;
  if (t == pts[hi].t) return pts[hi].y;
  return pts[lo].y +
         (pts[hi].y - pts[lo].y) * (t - pts[lo].t) / (pts[hi].t - pts[lo].t);
}

// Preimage of a value under a strictly increasing PL map.
Rat inverse_at(const std::vector<PLPoint>& pts, const Rat& y) {
  size_t lo = 0, hi = pts.size() - 1;
  while (lo + 1 < hi) {
    size_t mid = (lo + hi) / 2;
    if (pts[mid].y <= y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (y == pts[lo].y) return pts[lo].t;
  if (y == pts[hi].y) return pts[hi].t;
  return pts[lo].t +
         (pts[hi].t - pts[lo].t) * (y - pts[lo].y) / (pts[hi].y - pts[lo].y);
}

}  // namespace

PLPath make_pl_path(Rat duration, std::vector<PLPoint> pts) {
  if (!(duration > 0)) {
    throw InputError("path: duration must be positive, got " + rat_str(duration));
  }
  check_times(pts, "path");
  if (pts.front().t != 0) {
    throw InputError("path: first breakpoint must be at time 0, got " +
                     rat_str(pts.front().t));
  }
  if (pts.back().t != duration) {
    throw InputError("path: last breakpoint time " + rat_str(pts.back().t) +
                     " does not equal the duration " + rat_str(duration));
  }
  drop_collinear(pts);
  return {std::move(duration), std::move(pts)};
}

PLReparam make_pl_reparam(std::vector<PLPoint> pts) {
  check_times(pts, "reparam");
  if (pts.front().t != 0 || pts.front().y != 0 || pts.back().t != 1 || pts.back().y != 1) {
    throw InputError("reparam: must fix the endpoints (0,0) and (1,1)");
  }
  for (size_t i = 1; i < pts.size(); ++i) {
    if (!(pts[i - 1].y < pts[i].y)) {
      throw InputError("reparam: values must strictly increase, got " + rat_str(pts[i - 1].y) +
                       " then " + rat_str(pts[i].y));
    }
  }
  drop_collinear(pts);
  return {std::move(pts)};
}

PLReparam identity_reparam() { return make_pl_reparam({{0, 0}, {1, 1}}); }

Rat value_at(const PLPath& g, const Rat& t) {
  if (t < 0 || t > g.duration) {
    throw PreconditionError("path evaluation: " + rat_str(t) + " is outside [0, " +
                            rat_str(g.duration) + "]");
  }
  return interpolate(g.pts, t);
}

Rat reparam_at(const PLReparam& phi, const Rat& t) {
  if (t < 0 || t > 1) {
    throw PreconditionError("reparam evaluation: " + rat_str(t) + " is outside [0, 1]");
  }
  return interpolate(phi.pts, t);
}

PLPath moore_compose(const PLPath& g1, const PLPath& g2) {
  if (g1.pts.back().y != g2.pts.front().y) {
    throw PreconditionError("compose: endpoints mismatch, first path ends at " +
                            rat_str(g1.pts.back().y) + " but second starts at " +
                            rat_str(g2.pts.front().y));
  }
  std::vector<PLPoint> pts = g1.pts;
  for (size_t i = 1; i < g2.pts.size(); ++i) {
    pts.push_back({g2.pts[i].t + g1.duration, g2.pts[i].y});
  }
  drop_collinear(pts);
  return {g1.duration + g2.duration, std::move(pts)};
}

PLPath rescale(const PLPath& g) {
  std::vector<PLPoint> pts;
  pts.reserve(g.pts.size());
  for (const PLPoint& p : g.pts) pts.push_back({p.t / g.duration, p.y});
  return {1, std::move(pts)};  // collinearity is invariant under affine time maps
}

PLPath normalized_compose(const PLPath& g1, const PLPath& g2) {
  if (g1.duration != 1 || g2.duration != 1) {
    throw PreconditionError("normalized compose: both paths must have duration 1, got " +
                            rat_str(g1.duration) + " and " + rat_str(g2.duration));
  }
  return rescale(moore_compose(g1, g2));
}

PLReparam associator(const PLPath& a, const PLPath& b, const PLPath& c) {
  PLPath lhs = normalized_compose(normalized_compose(a, b), c);
  PLPath rhs = normalized_compose(a, normalized_compose(b, c));
  PLReparam phi = make_pl_reparam({{0, 0}, {Rat(1) / 4, Rat(1) / 2}, {Rat(1) / 2, Rat(3) / 4}, {1, 1}});
  if (!(act(rhs, phi) == lhs)) {
    throw std::logic_error("associator: fixed reparametrization failed the exact check");
  }
  return phi;
}

PLReparam blend(const PLReparam& phi, const PLReparam& psi, const Rat& s) {
  if (s < 0 || s > 1) {
    throw InputError("blend: parameter " + rat_str(s) + " is outside [0, 1]");
  }
  std::vector<Rat> times;
  for (const PLPoint& p : phi.pts) times.push_back(p.t);
  for (const PLPoint& p : psi.pts) times.push_back(p.t);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  std::vector<PLPoint> pts;
  for (const Rat& t : times) {
    pts.push_back({t, (1 - s) * interpolate(phi.pts, t) + s * interpolate(psi.pts, t)});
  }
  return make_pl_reparam(std::move(pts));
}

PLPath act(const PLPath& g, const PLReparam& phi) {
  if (g.duration != 1) {
    throw PreconditionError("act: path must have duration 1, got " + rat_str(g.duration));
  }
  // Breakpoints of g o phi: phi's own corners plus the preimages of g's
  // corners; between consecutive ones both maps are affine.
  std::vector<Rat> times;
  for (const PLPoint& p : phi.pts) times.push_back(p.t);
  for (const PLPoint& p : g.pts) times.push_back(inverse_at(phi.pts, p.t));
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  std::vector<PLPoint> pts;
  for (const Rat& t : times) pts.push_back({t, interpolate(g.pts, interpolate(phi.pts, t))});
  drop_collinear(pts);
  return {1, std::move(pts)};
}

PLReparam compose_reparam(const PLReparam& phi, const PLReparam& psi) {
  std::vector<Rat> times;
  for (const PLPoint& p : psi.pts) times.push_back(p.t);
  for (const PLPoint& p : phi.pts) times.push_back(inverse_at(psi.pts, p.t));
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  std::vector<PLPoint> pts;
  for (const Rat& t : times) {
    pts.push_back({t, interpolate(phi.pts, interpolate(psi.pts, t))});
  }
  return make_pl_reparam(std::move(pts));
}

PLReparam invert_reparam(const PLReparam& phi) {
  std::vector<PLPoint> pts;
  pts.reserve(phi.pts.size());
  for (const PLPoint& p : phi.pts) pts.push_back({p.y, p.t});
  return make_pl_reparam(std::move(pts));
}

namespace {

Rat parse_rat(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s.empty()) throw InputError("empty rational literal");
  size_t slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(s);
    Rat num{s.substr(0, slash)};
    Rat den{s.substr(slash + 1)};
    if (den == 0) throw InputError("rational literal '" + text + "' divides by zero");
    return num / den;
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw InputError("bad rational literal '" + text + "'");
  }
}

}  // namespace

PLPath parse_pl_path(const std::string& text) {
  // Format: dur=<rat>; pts=(t0,y0),(t1,y1),...
  size_t semi = text.find(';');
  if (semi == std::string::npos) {
    throw InputError("path literal: expected `dur=<rat>; pts=...`, missing ';'");
  }
  auto strip = [](std::string s) {
    size_t b = s.find_first_not_of(" \t");
    size_t e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  std::string durPart = strip(text.substr(0, semi));
  std::string ptsPart = strip(text.substr(semi + 1));
  if (durPart.rfind("dur=", 0) != 0) throw InputError("path literal: expected `dur=` prefix");
  if (ptsPart.rfind("pts=", 0) != 0) throw InputError("path literal: expected `pts=` section");
  Rat duration = parse_rat(durPart.substr(4));
  std::string body = ptsPart.substr(4);

  std::vector<PLPoint> pts;
  size_t i = 0;
  while (i < body.size()) {
    while (i < body.size() && (body[i] == ',' || std::isspace(static_cast<unsigned char>(body[i])))) {
      ++i;
    }
    if (i == body.size()) break;
    if (body[i] != '(') throw InputError("path literal: expected '(' in breakpoint list");
    size_t close = body.find(')', i);
    if (close == std::string::npos) throw InputError("path literal: unclosed breakpoint");
    std::string pair = body.substr(i + 1, close - i - 1);
    size_t comma = pair.find(',');
    if (comma == std::string::npos) {
      throw InputError("path literal: breakpoint needs `t,y`, got '" + pair + "'");
    }
    pts.push_back({parse_rat(pair.substr(0, comma)), parse_rat(pair.substr(comma + 1))});
    i = close + 1;
  }
  return make_pl_path(duration, std::move(pts));
}

std::string format_pl_path(const PLPath& g) {
  std::ostringstream os;
  os << "dur=" << g.duration << "; pts=";
  for (size_t i = 0; i < g.pts.size(); ++i) {
    if (i) os << ",";
    os << "(" << g.pts[i].t << "," << g.pts[i].y << ")";
  }
  return os.str();
}

std::string format_pl_reparam(const PLReparam& phi) {
  std::ostringstream os;
  os << "pts=";
  for (size_t i = 0; i < phi.pts.size(); ++i) {
    if (i) os << ",";
    os << "(" << phi.pts[i].t << "," << phi.pts[i].y << ")";
  }
  return os.str();
}

}  // namespace flowspace
