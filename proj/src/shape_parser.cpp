// Recursive-descent parser for shape specs such as "torus(R=2,r=0.5)" or "ellipse(2,1)".

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <utility>
#include <vector>

#include "riesz/errors.hpp"
#include "riesz/shapes.hpp"

namespace riesz {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  ShapeSpec parse() {
    ShapeSpec spec;
    skip_ws();
    spec.name = identifier();
    if (spec.name.empty()) fail("expected a shape name");
    skip_ws();
    if (peek() == '(') {
      ++pos_;
      skip_ws();
      if (peek() != ')') {
        int positional = 0;
        for (;;) {
          argument(spec.params, positional);
          skip_ws();
          if (peek() == ',') {
            ++pos_;
            continue;
          }
          break;
        }
      }
      expect(')');
    }
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
    return spec;
  }

 private:
  // key=value, or a bare value stored under "#<index>" for positional binding
  void argument(ParamMap& params, int& positional) {
    skip_ws();
    const std::size_t save = pos_;
    std::string key = identifier();
    skip_ws();
    if (!key.empty() && peek() == '=') {
      ++pos_;
      if (params.count(key)) fail("duplicate parameter '" + key + "'");
      params[key] = number();
      return;
    }
    pos_ = save;
    params["#" + std::to_string(positional++)] = number();
  }

  std::string identifier() {
    const std::size_t start = pos_;
    if (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) {
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                  s_[pos_] == '_' || s_[pos_] == '-'))
        ++pos_;
    }
    return s_.substr(start, pos_ - start);
  }

  double number() {
    skip_ws();
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("expected a number");
    if (!std::isfinite(v)) fail("parameter is not finite");
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::InvalidParams,
                "shape spec '" + s_ + "': " + what + " at position " + std::to_string(pos_));
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

struct Builtin {
  const char* name;
  std::vector<std::pair<const char*, double>> params;  // declaration order fixes positional binding
};

const std::vector<Builtin>& builtins() {
  static const std::vector<Builtin> table = {
      {"circle", {{"r", 1.0}}},
      {"ellipse", {{"a", 2.0}, {"b", 1.0}}},
      {"trefoil", {{"scale", 1.0}}},
      {"torus", {{"R", 2.0}, {"r", 0.5}}},
      {"sphere", {{"r", 1.0}}},
      {"ellipsoid", {{"a", 1.2}, {"b", 1.0}, {"c", 1.0}}},
      {"disk", {{"r", 1.0}}},
      {"ball", {{"n", 3.0}, {"r", 1.0}}},
      {"superellipse-domain", {{"a", 1.5}, {"b", 1.0}, {"q", 4.0}}},
  };
  return table;
}

ParamMap bind(const Builtin& b, const ParamMap& given) {
  ParamMap out;
  for (const auto& [k, v] : b.params) out[k] = v;
  for (const auto& [k, v] : given) {
    std::string key = k;
    if (!key.empty() && key[0] == '#') {
      const std::size_t idx = std::stoul(key.substr(1));
      if (idx >= b.params.size())
        throw Error(ErrorKind::InvalidParams,
                    std::string("too many positional parameters for ") + b.name);
      key = b.params[idx].first;
    } else if (!out.count(key)) {
      throw Error(ErrorKind::InvalidParams,
                  "unknown parameter '" + key + "' for " + b.name);
    }
    out[key] = v;
  }
  return out;
}

void require_positive(const ParamMap& p, std::initializer_list<const char*> keys) {
  for (const char* k : keys)
    if (!(p.at(k) > 0.0))
      throw Error(ErrorKind::InvalidParams, std::string("parameter ") + k + " must be positive");
}

}  // namespace

ShapeSpec parse_shape_spec(const std::string& text) { return Parser(text).parse(); }

Shape builtin_shape(const std::string& name, const ParamMap& params) {
  const Builtin* b = nullptr;
  for (const auto& entry : builtins())
    if (name == entry.name) b = &entry;
  if (!b) throw Error(ErrorKind::UnknownShape, "unknown shape '" + name + "'");
  const ParamMap p = bind(*b, params);

  if (name == "circle" || name == "sphere" || name == "disk") {
    require_positive(p, {"r"});
    if (name == "circle") return make_circle(p.at("r"));
    if (name == "sphere") return make_sphere(p.at("r"));
    return make_ball(2, p.at("r"));
  }
  if (name == "ellipse") {
    require_positive(p, {"a", "b"});
    return make_ellipse(p.at("a"), p.at("b"));
  }
  if (name == "trefoil") {
    require_positive(p, {"scale"});
    return make_trefoil(p.at("scale"));
  }
  if (name == "torus") {
    require_positive(p, {"R", "r"});
    if (!(p.at("r") < p.at("R")))
      throw Error(ErrorKind::InvalidParams, "torus needs r < R");
    return make_torus(p.at("R"), p.at("r"));
  }
  if (name == "ellipsoid") {
    require_positive(p, {"a", "b", "c"});
    return make_ellipsoid(p.at("a"), p.at("b"), p.at("c"));
  }
  if (name == "ball") {
    require_positive(p, {"r"});
    const double n = p.at("n");
    if (n != std::round(n)) throw Error(ErrorKind::InvalidParams, "ball dimension must be integral");
    return make_ball(static_cast<int>(n), p.at("r"));
  }
  // superellipse-domain
  require_positive(p, {"a", "b"});
  const double q = p.at("q");
  if (!(q >= 2.0) || q != std::round(q) || static_cast<long>(q) % 2 != 0)
    throw Error(ErrorKind::InvalidParams, "superellipse exponent q must be an even integer >= 2");
  return make_superellipse_domain(p.at("a"), p.at("b"), q);
}

Shape parse_shape(const std::string& text) {
  const ShapeSpec spec = parse_shape_spec(text);
  return builtin_shape(spec.name, spec.params);
}

}  // namespace riesz
