#include "core/io/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <initializer_list>
#include <limits>

#include "core/generator/generator.hpp"
#include "core/geometry/path.hpp"
#include "core/models/catalog.hpp"
#include "core/models/checks.hpp"
#include "core/moduli/moduli.hpp"
#include "core/support/error.hpp"
#include "core/support/numfmt.hpp"

namespace semiflow {

namespace {

constexpr double kNoThreshold = std::numeric_limits<double>::infinity();

bool valid_name(const std::string& n) {
  if (n.empty()) return false;
  for (char c : n) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
    if (!ok) return false;
  }
  return true;
}

// Shared parse state: collected errors plus the resolved-config echo that
// every getter (and every applied default) writes into.
struct RdState {
  Json resolved = Json::object();
  std::vector<std::string> errors;

  void err(const std::string& path, const std::string& msg) {
    errors.push_back(path + ": " + msg);
  }

  void throw_if_errors() const {
    if (errors.empty()) return;
    std::string msg = "invalid scenario (" +
                      std::to_string(errors.size()) + " problem" +
                      (errors.size() == 1 ? "" : "s") + "): " + errors[0];
    for (size_t i = 1; i < errors.size(); ++i) msg += "; " + errors[i];
    fail(ErrorCode::ConfigError, msg);
  }
};

// Resolves "a.b[2].c" inside the echo tree, creating containers on the way.
Json* resolved_slot(Json& root, const std::string& path) {
  Json* cur = &root;
  size_t i = 0;
  while (i <= path.size()) {
    size_t dot = path.find('.', i);
    std::string tok =
        path.substr(i, dot == std::string::npos ? std::string::npos : dot - i);
    size_t br = tok.find('[');
    std::string key = tok.substr(0, br);
    if (!key.empty()) {
      if (!cur->is_object()) *cur = Json::object();
      cur = &(*cur)[key];
    }
    while (br != std::string::npos) {
      size_t close = tok.find(']', br);
      size_t idx = std::stoul(tok.substr(br + 1, close - br - 1));
      if (!cur->is_array()) *cur = Json::array();
      while (cur->size() <= idx) cur->push_back(Json());
      cur = &(*cur)[idx];
      br = tok.find('[', close);
    }
    if (dot == std::string::npos) break;
    i = dot + 1;
  }
  return cur;
}

// Reader over one JSON node. Getters record a precise error per problem
// and echo every value they accept, defaults included. A reader over a
// missing optional node (live null) still echoes defaults; a reader over
// a node that already failed (dead null) stays silent to avoid cascades.
class Rd {
 public:
  Rd(RdState* st, const Json* node, std::string path, bool live)
      : st_(st), node_(node), path_(std::move(path)), live_(live) {}

  bool present() const { return node_ != nullptr; }

  std::string where(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const Json* find(const std::string& key) const {
    if (!node_) return nullptr;
    auto it = node_->find(key);
    return it == node_->end() ? nullptr : &*it;
  }

  bool has(const std::string& key) const { return find(key) != nullptr; }

  void echo(const std::string& key, const Json& v) const {
    if (node_ || live_) *resolved_slot(st_->resolved, where(key)) = v;
  }

  void err(const std::string& key, const std::string& msg) const {
    st_->err(where(key), msg);
  }

  void keys(std::initializer_list<const char*> allowed) const {
    if (!node_) return;
    for (const auto& item : node_->items()) {
      bool known = false;
      for (const char* a : allowed)
        if (item.key() == a) known = true;
      if (!known) err(item.key(), "unknown key");
    }
  }

  Rd sub(const std::string& key) const {  // required object
    const Json* n = find(key);
    if (!n) {
      if (node_) err(key, "missing");
      return Rd(st_, nullptr, where(key), false);
    }
    if (!n->is_object()) {
      err(key, "expected an object");
      return Rd(st_, nullptr, where(key), false);
    }
    return Rd(st_, n, where(key), true);
  }

  Rd sub_opt(const std::string& key) const {  // optional object, defaults live
    const Json* n = find(key);
    if (!n) return Rd(st_, nullptr, where(key), node_ != nullptr);
    if (!n->is_object()) {
      err(key, "expected an object");
      return Rd(st_, nullptr, where(key), false);
    }
    return Rd(st_, n, where(key), true);
  }

  Rd item(const std::string& key, size_t i, const Json* elem) const {
    std::string p = where(key) + "[" + std::to_string(i) + "]";
    if (!elem->is_object()) {
      st_->err(p, "expected an object");
      return Rd(st_, nullptr, p, false);
    }
    return Rd(st_, elem, p, true);
  }

  std::string str(const std::string& key) const {
    const Json* n = find(key);
    if (!n) {
      if (node_) err(key, "missing");
      return "";
    }
    if (!n->is_string()) {
      err(key, "expected a string");
      return "";
    }
    echo(key, *n);
    return n->get<std::string>();
  }

  std::string str_or(const std::string& key, const std::string& def) const {
    if (!has(key)) {
      echo(key, def);
      return def;
    }
    return str(key);
  }

  double num(const std::string& key) const {
    const Json* n = find(key);
    if (!n) {
      if (node_) err(key, "missing");
      return 0.0;
    }
    if (!n->is_number()) {
      err(key, "expected a number");
      return 0.0;
    }
    echo(key, *n);
    return n->get<double>();
  }

  double num_or(const std::string& key, double def) const {
    if (!has(key)) {
      echo(key, def);
      return def;
    }
    return num(key);
  }

  long long int_(const std::string& key) const {
    const Json* n = find(key);
    if (!n) {
      if (node_) err(key, "missing");
      return 0;
    }
    if (!n->is_number_integer()) {
      err(key, "expected an integer");
      return 0;
    }
    echo(key, *n);
    return n->get<long long>();
  }

  long long int_or(const std::string& key, long long def) const {
    if (!has(key)) {
      echo(key, def);
      return def;
    }
    return int_(key);
  }

  std::uint64_t uint_or(const std::string& key, std::uint64_t def) const {
    if (!has(key)) {
      echo(key, def);
      return def;
    }
    const Json* n = find(key);
    bool ok = n->is_number_unsigned() ||
              (n->is_number_integer() && n->get<long long>() >= 0);
    if (!ok) {
      err(key, "expected a nonnegative integer");
      return def;
    }
    echo(key, *n);
    return n->get<std::uint64_t>();
  }

  Vec vec(const std::string& key) const {
    const Json* n = find(key);
    if (!n) {
      if (node_) err(key, "missing");
      return {};
    }
    Vec out;
    if (!n->is_array()) {
      err(key, "expected an array of numbers");
      return out;
    }
    for (const Json& v : *n) {
      if (!v.is_number()) {
        err(key, "expected an array of numbers");
        return {};
      }
      out.push_back(v.get<double>());
    }
    echo(key, *n);
    return out;
  }

  Vec vec_or(const std::string& key, const Vec& def) const {
    if (!has(key)) {
      echo(key, Json(def));
      return def;
    }
    return vec(key);
  }

  std::vector<Vec> rows(const std::string& key) const {
    const Json* n = find(key);
    if (!n) {
      if (node_) err(key, "missing");
      return {};
    }
    std::vector<Vec> out;
    if (!n->is_array()) {
      err(key, "expected an array of number arrays");
      return out;
    }
    for (const Json& row : *n) {
      if (!row.is_array()) {
        err(key, "expected an array of number arrays");
        return {};
      }
      Vec r;
      for (const Json& v : row) {
        if (!v.is_number()) {
          err(key, "expected an array of number arrays");
          return {};
        }
        r.push_back(v.get<double>());
      }
      out.push_back(std::move(r));
    }
    echo(key, *n);
    return out;
  }

  std::vector<std::string> str_list(const std::string& key) const {
    const Json* n = find(key);
    if (!n) {
      if (node_) err(key, "missing");
      return {};
    }
    std::vector<std::string> out;
    if (!n->is_array()) {
      err(key, "expected an array of strings");
      return out;
    }
    for (const Json& v : *n) {
      if (!v.is_string()) {
        err(key, "expected an array of strings");
        return {};
      }
      out.push_back(v.get<std::string>());
    }
    echo(key, *n);
    return out;
  }

  RdState* state() const { return st_; }

 private:
  RdState* st_;
  const Json* node_;
  std::string path_;
  bool live_;
};

NormKind parse_norm(const Rd& rd) {
  std::string n = rd.str_or("norm", "euclidean");
  if (n == "euclidean") return NormKind::Euclidean;
  if (n == "sup" || n == "sup-norm") return NormKind::Sup;
  rd.err("norm", "expected 'euclidean' or 'sup'");
  return NormKind::Euclidean;
}

Domain parse_domain(const Rd& dom, RdState& st) {
  Domain out;
  if (!dom.present()) return out;
  std::string shape = dom.str("shape");
  size_t before = st.errors.size();
  try {
    if (shape == "interval") {
      dom.keys({"shape", "lo", "hi"});
      double lo = dom.num("lo"), hi = dom.num("hi");
      if (st.errors.size() == before) out = make_interval(lo, hi);
    } else if (shape == "box") {
      dom.keys({"shape", "lo", "hi", "norm"});
      Vec lo = dom.vec("lo"), hi = dom.vec("hi");
      NormKind norm = parse_norm(dom);
      if (lo.size() != hi.size() || lo.empty())
        dom.err("lo", "lo and hi need the same nonzero length");
      if (st.errors.size() == before) out = make_box(lo, hi, norm);
    } else if (shape == "ball") {
      dom.keys({"shape", "center", "radius", "norm"});
      Vec c = dom.vec("center");
      double r = dom.num("radius");
      NormKind norm = parse_norm(dom);
      if (c.empty()) dom.err("center", "needs at least one coordinate");
      if (st.errors.size() == before) out = make_ball(c, r, norm);
    } else if (shape == "union_of_boxes") {
      dom.keys({"shape", "boxes", "norm"});
      NormKind norm = parse_norm(dom);
      const Json* arr = dom.find("boxes");
      std::vector<Piece> pieces;
      if (!arr || !arr->is_array() || arr->empty()) {
        dom.err("boxes", "expected a nonempty array of {lo, hi} boxes");
      } else {
        for (size_t i = 0; i < arr->size(); ++i) {
          Rd box = dom.item("boxes", i, &(*arr)[i]);
          box.keys({"lo", "hi"});
          Vec lo = box.vec("lo"), hi = box.vec("hi");
          if (st.errors.size() == before) pieces.push_back(piece_box(lo, hi));
        }
      }
      if (st.errors.size() == before) out = make_union(pieces, norm);
    } else if (shape == "union_of_convex_polytopes") {
      dom.keys({"shape", "polytopes", "norm"});
      NormKind norm = parse_norm(dom);
      const Json* arr = dom.find("polytopes");
      std::vector<Piece> pieces;
      if (!arr || !arr->is_array() || arr->empty()) {
        dom.err("polytopes", "expected a nonempty array of {a, b} systems");
      } else {
        for (size_t i = 0; i < arr->size(); ++i) {
          Rd poly = dom.item("polytopes", i, &(*arr)[i]);
          poly.keys({"a", "b"});
          std::vector<Vec> a = poly.rows("a");
          Vec b = poly.vec("b");
          if (st.errors.size() == before)
            pieces.push_back(piece_polytope(a, b));
        }
      }
      if (st.errors.size() == before) out = make_union(pieces, norm);
    } else if (shape == "chain_boxes") {
      dom.keys({"shape", "a", "n"});
      double a = dom.num("a");
      long long n = dom.int_("n");
      if (st.errors.size() == before)
        out = make_chain_boxes_domain(a, static_cast<int>(n));
    } else if (!shape.empty()) {
      dom.err("shape",
              "expected interval, box, ball, union_of_boxes, "
              "union_of_convex_polytopes, or chain_boxes");
    }
  } catch (const Error& e) {
    dom.err("shape", e.what());
  }
  return out;
}

Subset parse_subset(const Rd& sub, const Domain& d, RdState& st) {
  Subset out;
  if (!sub.present()) return out;
  std::string shape = sub.str("shape");
  size_t before = st.errors.size();
  try {
    if (shape == "points") {
      sub.keys({"shape", "points"});
      std::vector<Vec> pts = sub.rows("points");
      if (pts.empty()) sub.err("points", "needs at least one point");
      for (const Vec& p : pts)
        if (static_cast<int>(p.size()) != d.dim) {
          sub.err("points", "every point needs " + std::to_string(d.dim) +
                                " coordinates");
          break;
        }
      if (st.errors.size() == before) out = subset_points(pts);
    } else if (shape == "box") {
      sub.keys({"shape", "lo", "hi"});
      Vec lo = sub.vec("lo"), hi = sub.vec("hi");
      if (static_cast<int>(lo.size()) != d.dim ||
          static_cast<int>(hi.size()) != d.dim)
        sub.err("lo", "lo and hi need " + std::to_string(d.dim) +
                          " coordinates each");
      if (st.errors.size() == before) out = subset_box(lo, hi);
    } else if (shape == "ball") {
      sub.keys({"shape", "center", "radius"});
      Vec c = sub.vec("center");
      double r = sub.num("radius");
      if (static_cast<int>(c.size()) != d.dim)
        sub.err("center", "needs " + std::to_string(d.dim) + " coordinates");
      if (st.errors.size() == before) out = subset_ball(c, r, d.norm);
    } else if (!shape.empty()) {
      sub.err("shape", "expected points, box, or ball");
    }
  } catch (const Error& e) {
    sub.err("shape", e.what());
  }
  return out;
}

bool family_owns_domain(const std::string& name) {
  return name == "piecewise_decay" || name == "rotation2d" ||
         name == "cubic_decay";
}

// Builds the family; for names with a built-in domain the scenario domain
// comes from the family rather than the config.
void parse_family(const Rd& fam, Scenario& s, RdState& st) {
  if (!fam.present()) return;
  size_t before = st.errors.size();
  try {
    if (fam.has("name")) {
      std::string name = fam.str("name");
      if (name == "piecewise_decay") {
        fam.keys({"name"});
        s.family = piecewise_decay_family();
      } else if (name == "cubic_decay") {
        fam.keys({"name"});
        s.family = cubic_decay_family();
      } else if (name == "rotation2d") {
        fam.keys({"name", "omega", "radius"});
        double omega = fam.num("omega");
        double radius = fam.num("radius");
        if (st.errors.size() == before)
          s.family = rotation2d_family(omega, radius);
      } else if (name == "linear") {
        fam.keys({"name", "matrix"});
        std::vector<Vec> m = fam.rows("matrix");
        size_t n = m.size();
        bool square = n > 0;
        for (const Vec& row : m) square = square && row.size() == n;
        if (!square) {
          fam.err("matrix", "expected a square matrix");
        } else if (static_cast<int>(n) != s.domain.dim) {
          fam.err("matrix", "matrix is " + std::to_string(n) + "x" +
                                std::to_string(n) + " but the domain has " +
                                "dimension " + std::to_string(s.domain.dim));
        }
        if (st.errors.size() == before) {
          Mat a(static_cast<int>(n), static_cast<int>(n));
          for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
              a(static_cast<int>(i), static_cast<int>(j)) = m[i][j];
          s.family = linear_family(a, s.domain);
        }
      } else if (!name.empty()) {
        fam.err("name",
                "expected piecewise_decay, linear, rotation2d, or "
                "cubic_decay (or drop 'name' and give 'field')");
      }
    } else {
      fam.keys({"field", "integrator_tolerance"});
      std::vector<std::string> comps = fam.str_list("field");
      double itol = fam.num_or("integrator_tolerance", 1e-10);
      if (comps.empty()) {
        fam.err("field", "needs one expression per coordinate");
      } else if (static_cast<int>(comps.size()) != s.domain.dim) {
        fam.err("field", "has " + std::to_string(comps.size()) +
                             " components but the domain has dimension " +
                             std::to_string(s.domain.dim));
      }
      std::vector<Expr> exprs;
      for (size_t i = 0; i < comps.size(); ++i) {
        try {
          Expr e = Expr::parse(comps[i]);
          if (e.max_coord() > s.domain.dim)
            st.err(fam.where("field") + "[" + std::to_string(i) + "]",
                   "references coordinate x" + std::to_string(e.max_coord()) +
                       " beyond dimension " + std::to_string(s.domain.dim));
          exprs.push_back(std::move(e));
        } catch (const Error& e) {
          st.err(fam.where("field") + "[" + std::to_string(i) + "]", e.what());
        }
      }
      if (st.errors.size() == before) {
        VectorField vf;
        vf.name = "field";
        vf.f = [exprs](const Vec& x) {
          Vec out(exprs.size());
          for (size_t i = 0; i < exprs.size(); ++i) out[i] = exprs[i].eval(x);
          return out;
        };
        IntegratorConfig cfg;
        cfg.abs_tol = itol;
        cfg.rel_tol = itol;
        s.family = flow_family(vf, s.domain, cfg);
      }
    }
  } catch (const Error& e) {
    st.err("family", e.what());
  }
  if (st.errors.size() == before) s.has_family = true;
}

std::vector<Expr> parse_map_exprs(const Rd& owner, const std::string& key,
                                  int dim, RdState& st) {
  std::vector<std::string> comps = owner.str_list(key);
  std::vector<Expr> out;
  if (static_cast<int>(comps.size()) != dim) {
    owner.err(key, "has " + std::to_string(comps.size()) +
                       " components but the domain has dimension " +
                       std::to_string(dim));
  }
  for (size_t i = 0; i < comps.size(); ++i) {
    try {
      Expr e = Expr::parse(comps[i]);
      if (e.max_coord() > dim)
        st.err(owner.where(key) + "[" + std::to_string(i) + "]",
               "references coordinate x" + std::to_string(e.max_coord()) +
                   " beyond dimension " + std::to_string(dim));
      out.push_back(std::move(e));
    } catch (const Error& e) {
      st.err(owner.where(key) + "[" + std::to_string(i) + "]", e.what());
    }
  }
  return out;
}

void parse_t_grid(const Rd& root, Scenario& s, RdState& st) {
  Rd g = root.sub_opt("t_grid");
  if (g.present() && g.has("list")) {
    g.keys({"list"});
    Vec list = g.vec("list");
    if (list.empty()) g.err("list", "needs at least one time");
    for (double t : list)
      if (!(t > 0.0)) {
        g.err("list", "times must be positive");
        break;
      }
    s.t_grid = list;
    return;
  }
  g.keys({"start", "stop", "count", "spacing"});
  double start = g.num_or("start", 1e-4);
  double stop = g.num_or("stop", 1.0);
  long long count = g.int_or("count", 20);
  std::string spacing = g.str_or("spacing", "geometric");
  if (spacing != "geometric" && spacing != "linear")
    g.err("spacing", "expected 'geometric' or 'linear'");
  if (!(start > 0.0)) g.err("start", "must be positive");
  if (!(stop > start)) g.err("stop", "must exceed start");
  if (count < 2) g.err("count", "needs at least 2 points");
  if (!st.errors.empty()) return;
  s.t_grid.clear();
  for (long long k = 0; k < count; ++k) {
    double w = static_cast<double>(k) / static_cast<double>(count - 1);
    s.t_grid.push_back(spacing == "geometric"
                           ? start * std::pow(stop / start, w)
                           : start + (stop - start) * w);
  }
}

void parse_sample(const Rd& root, Scenario& s) {
  Rd smp = root.sub_opt("sample");
  smp.keys({"strategy", "points", "pairs", "seed"});
  s.strategy = smp.str_or("strategy", "grid");
  if (s.strategy != "grid" && s.strategy != "quasi-random")
    smp.err("strategy", "expected 'grid' or 'quasi-random'");
  long long pts = smp.int_or("points", 25);
  long long prs = smp.int_or("pairs", 50);
  if (pts < 1) smp.err("points", "needs at least 1");
  if (prs < 0) smp.err("pairs", "must be nonnegative");
  s.n_points = static_cast<int>(pts);
  s.n_pairs = static_cast<int>(prs);
  s.seed = smp.uint_or("seed", 1);
}

void parse_checks(const Rd& root, Scenario& s, RdState& st) {
  const Json* arr = root.find("checks");
  if (!arr) {
    st.err("checks", "missing");
    return;
  }
  if (!arr->is_array() || arr->empty()) {
    st.err("checks", "expected a nonempty array");
    return;
  }
  for (size_t i = 0; i < arr->size(); ++i) {
    Rd c = root.item("checks", i, &(*arr)[i]);
    CheckSpec spec;
    spec.kind = c.str("kind");
    spec.threshold =
        c.has("threshold") ? c.num("threshold") : kNoThreshold;
    if (spec.kind == "semigroup_law") {
      c.keys({"kind", "s_values", "t_values", "threshold"});
      if (!c.has("threshold")) {
        spec.threshold = 1e-12;
        c.echo("threshold", 1e-12);
      }
      spec.s_values = c.vec("s_values");
      spec.t_values = c.vec("t_values");
      if (spec.s_values.empty()) c.err("s_values", "needs at least one time");
      if (spec.t_values.empty()) c.err("t_values", "needs at least one time");
    } else if (spec.kind == "t_continuity") {
      c.keys({"kind", "t0", "threshold"});
      spec.t0 = c.num_or("t0", 0.0);
    } else if (spec.kind == "t_lipschitz") {
      c.keys({"kind", "threshold"});
    } else if (spec.kind == "derivative") {
      c.keys({"kind", "threshold", "fd_step"});
      spec.fd_step = c.num_or("fd_step", 1e-5);
      if (!(spec.fd_step > 0.0)) c.err("fd_step", "must be positive");
    } else if (c.present()) {
      c.err("kind",
            "expected semigroup_law, t_continuity, t_lipschitz, or "
            "derivative");
    }
    s.checks.push_back(std::move(spec));
  }
}

void parse_example(const Rd& ex, Scenario& s, RdState& st) {
  if (!ex.present()) return;
  ExampleSpec& e = s.example;
  e.which = ex.str("name");
  if (e.which == "piecewise_corner") {
    ex.keys({"name", "x_values", "t_lo", "t_hi", "spacing", "step",
             "jump_threshold"});
    e.x_values = ex.vec_or("x_values", {0.6, 0.7, 0.8, 0.9});
    for (double x : e.x_values)
      if (!(x > 0.5 && x < 1.0)) {
        ex.err("x_values", "corner starts must sit in (0.5, 1)");
        break;
      }
    e.t_lo = ex.num_or("t_lo", 0.05);
    e.t_hi = ex.num_or("t_hi", 0.8);
    e.spacing = ex.num_or("spacing", 1e-3);
    e.step = ex.num_or("step", 1e-5);
    e.jump_threshold = ex.num_or("jump_threshold", 1e-3);
    if (!(e.t_lo > 0.0 && e.t_hi > e.t_lo)) ex.err("t_lo", "needs 0 < t_lo < t_hi");
    if (!(e.spacing > 0.0) || !(e.step > 0.0))
      ex.err("spacing", "spacing and step must be positive");
  } else if (e.which == "ellinf_paths") {
    ex.keys({"name", "a", "inner_a", "n_min", "n_max"});
    e.a = ex.num_or("a", 0.25);
    e.inner_a = ex.num_or("inner_a", 0.1);
    e.n_min = static_cast<int>(ex.int_or("n_min", 2));
    e.n_max = static_cast<int>(ex.int_or("n_max", 8));
    if (!(e.a > 0.0 && e.a < 0.5)) ex.err("a", "needs 0 < a < 1/2");
    if (!(e.inner_a > 0.0 && e.inner_a < e.a))
      ex.err("inner_a", "needs 0 < inner_a < a");
    if (e.n_min < 1 || e.n_max < e.n_min)
      ex.err("n_min", "needs 1 <= n_min <= n_max");
  } else if (!e.which.empty()) {
    ex.err("name", "expected piecewise_corner or ellinf_paths");
  }
  (void)st;
}

// Structural peeks used to decide which top-level keys a command needs,
// before the ordered reads run.
const Json* peek(const Json& root, const char* key) {
  auto it = root.find(key);
  return it == root.end() ? nullptr : &*it;
}

std::string peek_str(const Json* node, const char* key) {
  if (!node || !node->is_object()) return "";
  auto it = node->find(key);
  return it != node->end() && it->is_string() ? it->get<std::string>() : "";
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  Json rootj;
  try {
    rootj = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    size_t line = 1;
    size_t stop = std::min(static_cast<size_t>(e.byte), json_text.size());
    for (size_t i = 0; i < stop; ++i)
      if (json_text[i] == '\n') ++line;
    fail(ErrorCode::ConfigError,
         "config line " + std::to_string(line) + ": " + e.what());
  }
  if (!rootj.is_object())
    fail(ErrorCode::ConfigError, "config root: expected an object");

  RdState st;
  Rd root(&st, &rootj, "", true);
  Scenario s;

  s.name = root.str("name");
  if (!s.name.empty() && !valid_name(s.name))
    st.err("name", "use letters, digits, '.', '_', '-' only");
  s.command = root.str("command");
  s.tolerance = root.num_or("tolerance", 1e-9);
  if (!(s.tolerance >= 0.0)) st.err("tolerance", "must be nonnegative");

  if (s.command == "example") {
    root.keys({"name", "command", "tolerance", "example"});
    parse_example(root.sub("example"), s, st);
    st.throw_if_errors();
    s.resolved = st.resolved;
    return s;
  }
  if (s.command != "check" && s.command != "generator" &&
      s.command != "lemma") {
    if (!s.command.empty())
      st.err("command", "expected check, generator, lemma, or example");
    st.throw_if_errors();
  }

  // which top-level keys the command consumes
  std::string fam_name = peek_str(peek(rootj, "family"), "name");
  bool own_domain = family_owns_domain(fam_name);
  std::string lemma_which = peek_str(peek(rootj, "lemma"), "which");
  bool lemma_has_map = [&] {
    const Json* l = peek(rootj, "lemma");
    return l && l->is_object() && l->contains("map");
  }();
  bool wants_mu = false, wants_grid = false;
  if (s.command == "check") {
    if (const Json* arr = peek(rootj, "checks"); arr && arr->is_array())
      for (const Json& c : *arr) {
        std::string kind = peek_str(&c, "kind");
        wants_mu = wants_mu || kind == "t_lipschitz";
        wants_grid = wants_grid || (kind != "semigroup_law" && !kind.empty());
      }
  } else if (s.command == "generator") {
    wants_mu = true;
  } else if (s.command == "lemma") {
    wants_mu = lemma_which != "transfer";
    wants_grid = lemma_which == "transfer";
  }
  bool family_required =
      s.command != "lemma" ||
      lemma_which == "corollary" || lemma_which == "transfer" ||
      !lemma_has_map;
  bool subset_required = s.command != "lemma" || lemma_which != "transfer";

  {
    std::vector<const char*> allowed = {"name",   "command", "tolerance",
                                        "domain", "subset",  "family",
                                        "sample", "mu"};
    if (s.command == "check") {
      allowed.push_back("checks");
      allowed.push_back("t_grid");
    }
    if (s.command == "generator") allowed.push_back("generator");
    if (s.command == "lemma") {
      allowed.push_back("lemma");
      allowed.push_back("t_grid");
    }
    for (const auto& item : rootj.items()) {
      bool known = false;
      for (const char* a : allowed)
        if (item.key() == a) known = true;
      if (!known) st.err(item.key(), "unknown key");
    }
  }

  // domain and family; subset parsing needs a valid domain, nothing more
  size_t pre_domain = st.errors.size();
  bool domain_ok = false;
  if (family_required || root.has("family")) {
    if (own_domain) {
      if (root.has("domain"))
        st.err("domain", "family '" + fam_name + "' brings its own domain");
      parse_family(root.sub("family"), s, st);
      if (s.has_family) s.domain = s.family.domain;
      domain_ok = s.has_family;
    } else {
      s.domain = parse_domain(root.sub("domain"), st);
      domain_ok = st.errors.size() == pre_domain;
      if (domain_ok) parse_family(root.sub("family"), s, st);
    }
  } else {
    s.domain = parse_domain(root.sub("domain"), st);
    domain_ok = st.errors.size() == pre_domain;
  }

  // subset and mu
  if (subset_required) {
    if (domain_ok) {
      size_t pre_subset = st.errors.size();
      s.d_hat = parse_subset(root.sub("subset"), s.domain, st);
      s.has_subset = st.errors.size() == pre_subset;
    } else if (!root.has("subset")) {
      st.err("subset", "missing");
    }
  } else if (root.has("subset")) {
    st.err("subset", "transfer scenarios draw from lemma.d1 instead");
  }
  if (wants_mu) {
    s.mu = root.num("mu");
    if (root.has("mu") && !(s.mu > 0.0 && s.mu < 1.0))
      st.err("mu", "needs 0 < mu < 1");
  } else if (root.has("mu")) {
    st.err("mu", "not used by this scenario");
  }

  parse_sample(root, s);
  if (wants_grid) parse_t_grid(root, s, st);

  if (s.command == "check") parse_checks(root, s, st);

  if (s.command == "generator") {
    Rd g = root.sub_opt("generator");
    g.keys({"epsilon", "t_max", "floor", "gap_floor"});
    s.gen.epsilon = g.num_or("epsilon", 1e-3);
    s.gen.t_max = g.num_or("t_max", 1.0);
    s.gen.floor = g.num_or("floor", 1e-7);
    s.gen.gap_floor = g.num_or("gap_floor", 1e-6);
    if (!(s.gen.epsilon > 0.0)) g.err("epsilon", "must be positive");
    if (!(s.gen.t_max > 0.0)) g.err("t_max", "must be positive");
    if (!(s.gen.floor > 0.0 && s.gen.floor < s.gen.t_max))
      g.err("floor", "needs 0 < floor < t_max");
    if (!(s.gen.gap_floor > 0.0)) g.err("gap_floor", "must be positive");
  }

  if (s.command == "lemma") {
    Rd l = root.sub("lemma");
    LemmaSpec& spec = s.lemma;
    spec.which = l.str("which");
    if (spec.which == "iterates") {
      l.keys({"which", "p", "map", "t0"});
      spec.p = static_cast<int>(l.int_("p"));
      if (spec.p < 1) l.err("p", "needs p >= 1");
      if (l.has("map"))
        spec.map_exprs = parse_map_exprs(l, "map", s.domain.dim, st);
      else
        spec.t0 = l.num("t0");
    } else if (spec.which == "corollary") {
      l.keys({"which", "p", "t0"});
      spec.p = static_cast<int>(l.int_("p"));
      spec.t0 = l.num("t0");
      if (spec.p < 1) l.err("p", "needs p >= 1");
      if (l.present() && !(spec.t0 > 0.0)) l.err("t0", "must be positive");
    } else if (spec.which == "derivative") {
      l.keys({"which", "map", "t0", "fd_step"});
      spec.fd_step = l.num_or("fd_step", 1e-5);
      if (!(spec.fd_step > 0.0)) l.err("fd_step", "must be positive");
      if (l.has("map"))
        spec.map_exprs = parse_map_exprs(l, "map", s.domain.dim, st);
      else
        spec.t0 = l.num("t0");
    } else if (spec.which == "transfer") {
      l.keys({"which", "t0", "d1"});
      spec.t0 = l.num("t0");
      if (domain_ok) spec.d1 = parse_subset(l.sub("d1"), s.domain, st);
    } else if (l.present()) {
      l.err("which",
            "expected iterates, corollary, derivative, or transfer");
    }
    bool map_needs_family = spec.map_exprs.empty() &&
                            (spec.which == "iterates" || spec.which == "derivative");
    if ((map_needs_family || spec.which == "corollary" ||
         spec.which == "transfer") &&
        !root.has("family"))
      st.err("family", "missing");
  }

  st.throw_if_errors();
  s.resolved = st.resolved;
  return s;
}

void scenario_set_seed(Scenario& s, std::uint64_t seed) {
  s.seed = seed;
  s.resolved["sample"]["seed"] = seed;
}

void scenario_set_tolerance(Scenario& s, double tolerance) {
  require(tolerance >= 0.0, ErrorCode::BadParameter,
          "tolerance must be nonnegative");
  s.tolerance = tolerance;
  s.resolved["tolerance"] = tolerance;
}

namespace {

std::string fmt_vec(const Vec& v) {
  std::string out = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt_double_sig(v[i], 6);
  }
  return out + ")";
}

std::string sig(double v) { return fmt_double_sig(v, 6); }

struct Emitter {
  bool want_csv, want_json;
  std::string prefix;
  Json meta;
  ScenarioResult* res;

  Json meta_for(const std::string& artifact) const {
    Json m = meta;
    m["artifact"] = artifact;
    return m;
  }

  void put(const std::string& suffix, const std::string& content) const {
    std::string path = prefix + suffix;
    write_text_file(path, content);
    res->files.push_back(path);
  }

  void put_csv(const std::string& artifact, const std::string& body) const {
    if (want_csv) put("_" + artifact + ".csv", body);
  }

  void put_doc(const std::string& artifact, const std::string& kind,
               Json payload) const {
    if (!want_json) return;
    Json doc = report_document(kind, meta_for(artifact), std::move(payload));
    put("_" + artifact + ".json", doc.dump(2) + "\n");
  }
};

void run_check(const Scenario& s, Emitter& em, ScenarioResult& res) {
  SampleSet pts = draw_points(s.d_hat, s.domain, s.strategy, s.n_points, s.seed);
  SampleSet pairs;
  bool all = true;
  for (const CheckSpec& c : s.checks) {
    bool informational = c.threshold == kNoThreshold;
    if (c.kind == "semigroup_law") {
      double worst = -1.0;
      double ws = 0.0, wt = 0.0;
      Vec wx;
      Json rows = Json::array();
      std::string body = csv_meta_header(em.meta_for(c.kind));
      std::vector<std::string> header = {"s", "t", "residual"};
      for (int i = 1; i <= s.domain.dim; ++i)
        header.push_back("x" + std::to_string(i));
      body += csv_row(header);
      for (double sv : c.s_values)
        for (double tv : c.t_values) {
          ModulusReport rep = compose_residual(s.family, sv, tv, pts);
          double r = rep.values[0];
          const Vec& x = rep.witnesses[0].x;
          Json row;
          row["s"] = sv;
          row["t"] = tv;
          row["residual"] = r;
          row["x"] = x;
          rows.push_back(row);
          std::vector<std::string> cells = {fmt_double(sv), fmt_double(tv),
                                            fmt_double(r)};
          for (double xc : x) cells.push_back(fmt_double(xc));
          body += csv_row(cells);
          if (r > worst) {
            worst = r;
            ws = sv;
            wt = tv;
            wx = x;
          }
        }
      bool ok = worst <= c.threshold;
      all = all && ok;
      Json payload;
      payload["rows"] = rows;
      payload["max_residual"] = worst;
      payload["threshold"] = c.threshold;
      payload["pass"] = ok;
      payload["sample"] = to_json(pts.descriptor);
      em.put_csv(c.kind, body);
      em.put_doc(c.kind, "law_residuals", payload);
      res.summary.push_back("semigroup_law: " + std::string(ok ? "pass" : "fail") +
                            " (max residual " + sig(worst) + " at s=" + sig(ws) +
                            ", t=" + sig(wt) + ", x=" + fmt_vec(wx) +
                            ", threshold " + sig(c.threshold) + ")");
      continue;
    }
    ModulusReport rep;
    double crit = 0.0;
    std::string note;
    if (c.kind == "t_continuity") {
      rep = t_continuity_modulus(s.family, s.d_hat, c.t0, s.t_grid,
                                 s.n_points, s.seed);
      size_t near = 0;
      for (size_t i = 1; i < rep.t_grid.size(); ++i)
        if (std::fabs(rep.t_grid[i] - c.t0) <
            std::fabs(rep.t_grid[near] - c.t0))
          near = i;
      crit = rep.values[near];
      note = "value " + sig(crit) + " at t=" + sig(rep.t_grid[near]);
    } else if (c.kind == "t_lipschitz") {
      if (pairs.points.empty())
        pairs = draw_sample(s.d_hat, s.domain, s.mu, s.strategy, s.n_points,
                            s.n_pairs, s.seed);
      rep = t_lipschitz_modulus(s.family, s.d_hat, s.mu, s.t_grid, pairs);
      size_t top = 0;
      for (size_t i = 1; i < rep.values.size(); ++i)
        if (rep.values[i] > rep.values[top]) top = i;
      crit = rep.values[top];
      note = "max " + sig(crit) + " at t=" + sig(rep.t_grid[top]);
      if (rep.witnesses[top].has_pair)
        note += ", witness x=" + fmt_vec(rep.witnesses[top].x) +
                ", x_tilde=" + fmt_vec(rep.witnesses[top].x_tilde);
    } else {  // derivative
      rep = derivative_modulus(s.family, s.d_hat, s.t_grid, pts, c.fd_step);
      size_t top = 0;
      for (size_t i = 1; i < rep.values.size(); ++i)
        if (rep.values[i] > rep.values[top]) top = i;
      crit = rep.values[top];
      note = "max " + sig(crit) + " at t=" + sig(rep.t_grid[top]);
    }
    bool ok = informational || crit <= c.threshold;
    all = all && ok;
    em.put_csv(c.kind, modulus_csv(rep, em.meta_for(c.kind)));
    Json payload = to_json(rep);
    payload["criterion_value"] = crit;
    if (!informational) payload["threshold"] = c.threshold;
    payload["pass"] = ok;
    em.put_doc(c.kind, "modulus_report", payload);
    res.summary.push_back(
        c.kind + ": " +
        (informational ? "recorded" : ok ? "pass" : "fail") + " (" + note +
        (informational ? "" : ", threshold " + sig(c.threshold)) + ")");
  }
  res.pass = all;
}

void run_generator(const Scenario& s, Emitter& em, ScenarioResult& res) {
  SampleSet sample = draw_sample(s.d_hat, s.domain, s.mu, s.strategy,
                                 s.n_points, s.n_pairs, s.seed);
  std::vector<double> sched = generator_schedule(s.gen.t_max, s.gen.floor);
  GeneratorEstimate est = estimate_generator(
      s.family, s.d_hat, s.mu, s.gen.epsilon, sched, sample, s.gen.gap_floor);
  Json payload = to_json(est);
  payload["sample"] = to_json(sample.descriptor);
  em.put_doc("estimate", "generator_estimate", std::move(payload));
  em.put_csv("fvalues", generator_fvalues_csv(est, em.meta_for("fvalues")));
  em.put_csv("gaps", generator_gaps_csv(est, em.meta_for("gaps")));
  res.pass = est.converged;
  res.summary.push_back(
      est.converged
          ? "generator: converged (delta1 " + sig(est.certificate.delta1) +
                ", L " + sig(est.certificate.L) + ", cauchy_gap " +
                sig(est.cauchy_gap) + " <= bound " +
                sig(est.certificate.bound) + ")"
          : "generator: not converged (schedule exhausted before three "
            "small gaps; cauchy_gap " + sig(est.cauchy_gap) + ")");
}

void run_lemma(const Scenario& s, Emitter& em, ScenarioResult& res) {
  const LemmaSpec& spec = s.lemma;
  MapFn phi;
  std::function<Mat(const Vec&)> jac;
  if (!spec.map_exprs.empty()) {
    const std::vector<Expr>& exprs = spec.map_exprs;
    phi = [&exprs](const Vec& x) {
      Vec out(exprs.size());
      for (size_t i = 0; i < exprs.size(); ++i) out[i] = exprs[i].eval(x);
      return out;
    };
  } else if (s.has_family && spec.which != "corollary" &&
             spec.which != "transfer") {
    const SemigroupFamily& fam = s.family;
    double t0 = spec.t0;
    phi = [&fam, t0](const Vec& x) { return evaluate(fam, t0, x); };
    if (fam.has_derivative())
      jac = [&fam, t0](const Vec& x) { return fam.deriv_fn(t0, x); };
  }

  InequalityReport rep;
  if (spec.which == "iterates") {
    SampleSet sample = draw_sample(s.d_hat, s.domain, s.mu, s.strategy,
                                   s.n_points, s.n_pairs, s.seed);
    rep = verify_lemma_iterates(phi, s.d_hat, s.domain, s.mu, spec.p, sample,
                                s.tolerance);
  } else if (spec.which == "corollary") {
    SampleSet sample = draw_sample(s.d_hat, s.domain, s.mu, s.strategy,
                                   s.n_points, s.n_pairs, s.seed);
    rep = verify_corollary_quotients(s.family, spec.t0, spec.p, s.d_hat, s.mu,
                                     sample, s.tolerance);
  } else if (spec.which == "derivative") {
    SampleSet sample = draw_sample(s.d_hat, s.domain, s.mu, s.strategy,
                                   s.n_points, s.n_pairs, s.seed);
    C1Map map;
    map.f = phi;
    map.jac = jac;
    rep = verify_lemma_derivative(map, s.d_hat, s.domain, s.mu, sample,
                                  s.tolerance, spec.fd_step);
  } else {  // transfer
    PathCertificate cert = finite_path_length_certificate(s.domain, spec.d1);
    SampleSet sample =
        draw_points(spec.d1, s.domain, s.strategy, s.n_points, s.seed);
    rep = verify_transfer_estimate(s.family, spec.d1, cert, spec.t0, s.t_grid,
                                   sample, s.tolerance);
    em.put_doc("certificate", "path_certificate", to_json(cert));
  }

  em.put_csv(spec.which, inequality_csv(rep, em.meta_for(spec.which)));
  em.put_doc(spec.which, "inequality_report", to_json(rep));
  res.pass = rep.pass;
  double worst = std::numeric_limits<double>::infinity();
  for (const InequalityPoint& p : rep.per_point) worst = std::min(worst, p.margin);
  res.summary.push_back(
      spec.which + ": " + (rep.pass ? "pass" : "fail") + " (ell " +
      sig(rep.ell) +
      (rep.per_point.empty() ? std::string(", no rows")
                             : ", worst margin " + sig(worst)) +
      ", tolerance " + sig(rep.tolerance) + ")");
}

void run_example_corners(const Scenario& s, Emitter& em, ScenarioResult& res) {
  const ExampleSpec& e = s.example;
  SemigroupFamily fam = piecewise_decay_family();
  std::vector<double> grid;
  for (double t = e.t_lo; t <= e.t_hi + 0.5 * e.spacing; t += e.spacing)
    grid.push_back(t);

  Json rows = Json::array();
  std::string body = csv_meta_header(em.meta_for("corners"));
  body += csv_row({"x", "corners", "t_corner", "t_exact", "t_error",
                   "left_slope", "right_slope"});
  bool all = true;
  double worst_err = 0.0;
  for (double x : e.x_values) {
    std::vector<Corner> cs =
        detect_corners(fam, {x}, grid, e.step, e.jump_threshold);
    double t_exact = std::log(2.0 * x);
    Json row;
    row["x"] = x;
    row["corners"] = cs.size();
    row["t_exact"] = t_exact;
    std::vector<std::string> cells = {fmt_double(x),
                                      std::to_string(cs.size())};
    if (cs.size() == 1) {
      const Corner& c = cs[0];
      double err = c.t_corner - t_exact;
      worst_err = std::max(worst_err, std::fabs(err));
      row["t_corner"] = c.t_corner;
      row["t_error"] = err;
      row["left_slope"] = c.left_slope[0];
      row["right_slope"] = c.right_slope[0];
      row["pass"] = std::fabs(err) <= 2.0 * e.step;
      cells.insert(cells.end(),
                   {fmt_double(c.t_corner), fmt_double(t_exact),
                    fmt_double(err), fmt_double(c.left_slope[0]),
                    fmt_double(c.right_slope[0])});
      all = all && std::fabs(err) <= 2.0 * e.step;
    } else {
      row["pass"] = false;
      cells.insert(cells.end(), {"", fmt_double(t_exact), "", "", ""});
      all = false;
    }
    rows.push_back(row);
    body += csv_row(cells);
  }
  Json payload;
  payload["rows"] = rows;
  payload["max_t_error"] = worst_err;
  payload["pass"] = all;
  em.put_csv("corners", body);
  em.put_doc("corners", "corner_table", payload);
  res.pass = all;
  res.summary.push_back(
      "piecewise_corner: " + std::string(all ? "pass" : "fail") + " (" +
      std::to_string(e.x_values.size()) + " starts, max |t_corner - ln(2 x)| " +
      sig(worst_err) + ", allowed " + sig(2.0 * e.step) + ")");
}

void run_example_paths(const Scenario& s, Emitter& em, ScenarioResult& res) {
  const ExampleSpec& e = s.example;
  Json rows = Json::array();
  std::string body = csv_meta_header(em.meta_for("bounds"));
  body += csv_row({"n", "level", "lower_bound", "reference", "witness_length",
                   "connected"});
  bool all = true;
  std::vector<Vec> top_witness;
  for (int n = e.n_min; n <= e.n_max; ++n) {
    Domain d = make_chain_boxes_domain(e.a, n);
    Subset inner =
        subset_pieces(make_chain_boxes_domain(e.inner_a, n).pieces, "inner");
    PathCertificate cert = finite_path_length_certificate(d, inner);
    bool connected = domain_connected(d);
    all = all && cert.refuted && connected;
    Vec origin(static_cast<size_t>(n), 0.0);
    for (const RefutationRow& r : cert.rows) {
      PathBound pb = shortest_path_bound(d, origin, chain_corner(d, r.level));
      bool ok = connected && r.lower_bound >= r.reference &&
                pb.witness_length >= r.lower_bound - 1e-9;
      all = all && ok;
      Json row;
      row["n"] = n;
      row["level"] = r.level;
      row["lower_bound"] = r.lower_bound;
      row["reference"] = r.reference;
      row["witness_length"] = pb.witness_length;
      row["connected"] = connected;
      rows.push_back(row);
      body += csv_row({std::to_string(n), std::to_string(r.level),
                       fmt_double(r.lower_bound), fmt_double(r.reference),
                       fmt_double(pb.witness_length),
                       connected ? "1" : "0"});
      if (n == e.n_max && r.level == n) top_witness = pb.witness;
    }
  }
  Json payload;
  payload["rows"] = rows;
  payload["pass"] = all;
  em.put_csv("bounds", body);
  em.put_doc("bounds", "path_bound_table", payload);
  if (!top_witness.empty())
    em.put_csv("witness_path",
               polyline_csv(top_witness, em.meta_for("witness_path")));
  res.pass = all;
  res.summary.push_back(
      "ellinf_paths: " + std::string(all ? "pass" : "fail") + " (n " +
      std::to_string(e.n_min) + ".." + std::to_string(e.n_max) + ", a " +
      sig(e.a) + ", every certified bound >= level/2: " +
      (all ? "yes" : "no") + ")");
}

}  // namespace

ScenarioResult run_scenario(const Scenario& s, const std::string& out_dir,
                            const std::string& format) {
  bool want_csv = format == "csv" || format == "both";
  bool want_json = format == "json" || format == "both";
  require(want_csv || want_json, ErrorCode::ConfigError,
          "format must be csv, json, or both");

  std::string dir = out_dir.empty() ? "." : out_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::IoError, "cannot create " + dir + ": " + ec.message());

  ScenarioResult res;
  Emitter em{want_csv, want_json, dir + "/" + s.name, Json(), &res};
  em.meta["scenario"] = s.name;
  em.meta["command"] = s.command;
  em.meta["config"] = s.resolved;

  if (s.command == "check") {
    run_check(s, em, res);
  } else if (s.command == "generator") {
    run_generator(s, em, res);
  } else if (s.command == "lemma") {
    run_lemma(s, em, res);
  } else if (s.command == "example") {
    if (s.example.which == "piecewise_corner")
      run_example_corners(s, em, res);
    else
      run_example_paths(s, em, res);
  } else {
    fail(ErrorCode::Internal, "unvalidated command '" + s.command + "'");
  }
  return res;
}

const char* builtin_scenario(const std::string& name) {
  if (name == "piecewise_corner")
    return R"({
  "name": "piecewise_corner",
  "command": "example",
  "example": {"name": "piecewise_corner"}
})";
  if (name == "ellinf_paths")
    return R"({
  "name": "ellinf_paths",
  "command": "example",
  "example": {"name": "ellinf_paths"}
})";
  return nullptr;
}

}  // namespace semiflow
