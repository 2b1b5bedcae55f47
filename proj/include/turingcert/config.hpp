#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cctype>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include "json.hpp"
#include "turingcert/errors.hpp"
#include "turingcert/harmonic.hpp"
#include "turingcert/interval.hpp"
#include "turingcert/threshold.hpp"

namespace turingcert {

namespace detail {

using boost::multiprecision::cpp_int;

// Exact value of a finite double as num / den.
inline void exact_ratio(double v, cpp_int& num, cpp_int& den) {
  int e = 0;
  double m = std::frexp(v, &e);
  num = static_cast<long long>(std::ldexp(m, 53));
  e -= 53;
  den = 1;
  if (e >= 0)
    num <<= e;
  else
    den <<= -e;
}

}  // namespace detail

/// Tightest binary64 interval containing a decimal literal; a point when the
/// literal is exactly representable.
inline Interval parse_decimal(const std::string& text) {
  static const std::regex re(R"(^\s*([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re) || (m[2].length() == 0 && m[3].length() == 0))
    throw ConfigError("not a decimal number: '" + text + "'");
  std::string digits = m[2].str() + m[3].str();
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
  long long exp10 = (m[4].matched ? std::stoll(m[4].str()) : 0) - static_cast<long long>(m[3].length());
  if (std::llabs(exp10) > 400) throw ConfigError("exponent out of range: '" + text + "'");
  const double v = std::strtod(text.c_str(), nullptr);
  if (!std::isfinite(v)) throw ConfigError("number out of range: '" + text + "'");

  using detail::cpp_int;
  cpp_int dnum(digits.empty() ? std::string("0") : digits), dden = 1;
  cpp_int ten = 10;
  if (exp10 >= 0)
    dnum *= boost::multiprecision::pow(ten, static_cast<unsigned>(exp10));
  else
    dden = boost::multiprecision::pow(ten, static_cast<unsigned>(-exp10));
  if (m[1] == "-") dnum = -dnum;
  if (dnum == 0) return Interval(0.0);
  cpp_int vnum, vden;
  detail::exact_ratio(v, vnum, vden);
  const cpp_int lhs = vnum * dden, rhs = dnum * vden;
  if (lhs == rhs) return Interval(v);
  if (lhs < rhs) return Interval(v, detail::next_up(v));
  return Interval(detail::next_down(v), v);
}

namespace detail {

// expr := term (('+'|'-') term)*; term := factor (('*'|'/') factor)*;
// factor := ('-'|'+') factor | number | 'pi' | 'sqrt' '(' expr ')' | '(' expr ')'
class ExprParser {
 public:
  explicit ExprParser(const std::string& s) : s_(s) {}

  Interval parse() {
    Interval v = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return v;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw ConfigError(why + " in expression '" + s_ + "'");
  }
  Interval expr() {
    Interval v = term();
    for (;;) {
      if (eat('+'))
        v += term();
      else if (eat('-'))
        v -= term();
      else
        return v;
    }
  }
  Interval term() {
    Interval v = factor();
    for (;;) {
      if (eat('*')) {
        v *= factor();
      } else if (eat('/')) {
        const Interval d = factor();
        if (d.contains(0.0)) fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }
  Interval factor() {
    if (eat('-')) return -factor();
    if (eat('+')) return factor();
    if (eat('(')) {
      Interval v = expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    skip();
    if (s_.compare(pos_, 2, "pi") == 0) {
      pos_ += 2;
      return Interval::pi();
    }
    if (s_.compare(pos_, 4, "sqrt") == 0) {
      pos_ += 4;
      if (!eat('(')) fail("expected '(' after sqrt");
      Interval v = expr();
      if (!eat(')')) fail("missing ')'");
      if (v.hi() < 0) fail("sqrt of negative");
      return sqrt(v);
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
      if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
        pos_ = q;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    if (start == pos_) fail("expected a number");
    return parse_decimal(s_.substr(start, pos_ - start));
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Evaluates expressions such as "pi/2+1/4" in interval arithmetic.
inline Interval parse_expression(const std::string& s) { return detail::ExprParser(s).parse(); }

/// JSON numbers are read through their shortest round-trip decimal, so a
/// literal like 2.428 is enclosed as the decimal it denotes.
inline Interval interval_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_expression(j.get<std::string>());
  if (j.is_number_integer()) return Interval(static_cast<double>(j.get<long long>()));
  if (j.is_number()) return parse_decimal(nlohmann::json(j.get<double>()).dump());
  if (j.is_object() && j.contains("lo") && j.contains("hi"))
    return Interval(interval_from_json(j["lo"]).lo(), interval_from_json(j["hi"]).hi());
  throw ConfigError("expected a number, expression string or {lo, hi}: " + j.dump());
}

/// "LO:HI" with each side a decimal or expression; a single value gives a
/// point enclosure.
inline Interval parse_delta_range(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) return parse_expression(s);
  const Interval lo = parse_expression(s.substr(0, colon));
  const Interval hi = parse_expression(s.substr(colon + 1));
  if (lo.lo() > hi.hi()) throw ConfigError("empty delta range '" + s + "'");
  return Interval(lo.lo(), hi.hi());
}

struct RunConfig {
  ProblemInstance inst;
  SweepConfig sweep;
  nlohmann::json source;
};

inline SubdomainUnion union_from_json(const nlohmann::json& j, const char* key) {
  if (!j.is_array() || j.empty()) throw ConfigError(std::string(key) + " must be a nonempty list of [lo, hi]");
  SubdomainUnion u;
  for (const auto& piece : j) {
    if (!piece.is_array() || piece.size() != 2) throw ConfigError(std::string(key) + " entries must be [lo, hi]");
    u.push_back({interval_from_json(piece[0]), interval_from_json(piece[1])});
  }
  return u;
}

inline RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig rc;
  rc.source = j;
  try {
    for (const char* key : {"a", "b", "c", "d", "theta", "l", "omega1", "omega2"})
      if (!j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
    ProblemInstance& p = rc.inst;
    p.a = interval_from_json(j["a"]);
    p.b = interval_from_json(j["b"]);
    p.c = interval_from_json(j["c"]);
    p.d = interval_from_json(j["d"]);
    p.theta = interval_from_json(j["theta"]);
    p.l = interval_from_json(j["l"]);
    p.omega1 = union_from_json(j["omega1"], "omega1");
    p.omega2 = union_from_json(j["omega2"], "omega2");
    if (j.contains("sweep")) {
      const auto& s = j["sweep"];
      SweepConfig& c = rc.sweep;
      c.grid_count = s.value("grid_count", c.grid_count);
      c.N = s.value("N", c.N);
      c.p = s.value("p", c.p);
      c.alpha = s.value("alpha", c.alpha);
      c.strict_discriminant = s.value("strict_discriminant", c.strict_discriminant);
      if (s.contains("delta_max")) c.delta_max = interval_from_json(s["delta_max"]);
    }
    p.validate();
    rc.sweep.validate(b_constant(p));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(e.what());
  } catch (const InvalidProblem& e) {
    throw ConfigError(e.what());
  } catch (const InvalidInterval& e) {
    throw ConfigError(e.what());
  }
  return rc;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace turingcert
