#include "adacons/scenario_file.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "adacons/error.hpp"

namespace adacons {

namespace {

// ---------------------------------------------------------------------------
// Lexing and generic value parsing

enum class Tok { Word, Number, String, LBracket, RBracket, LParen, RParen, Comma, Equals, Newline, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1;
  int depth = 0;
  std::size_t i = 0;
  const auto fail = [&](const std::string& msg) {
    throw ValidationError("scenario line " + std::to_string(line) + ": " + msg);
  };
  while (i < src.size()) {
    const char ch = src[i];
    if (ch == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    if (ch == '\n') {
      if (depth == 0 && (out.empty() || out.back().kind != Tok::Newline)) {
        out.push_back({Tok::Newline, "", line});
      }
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    switch (ch) {
      case '[': out.push_back({Tok::LBracket, "[", line}); ++depth; ++i; continue;
      case ']':
        out.push_back({Tok::RBracket, "]", line});
        if (--depth < 0) fail("unbalanced ']'");
        ++i;
        continue;
      case '(': out.push_back({Tok::LParen, "(", line}); ++depth; ++i; continue;
      case ')':
        out.push_back({Tok::RParen, ")", line});
        if (--depth < 0) fail("unbalanced ')'");
        ++i;
        continue;
      case ',': out.push_back({Tok::Comma, ",", line}); ++i; continue;
      case '=': out.push_back({Tok::Equals, "=", line}); ++i; continue;
      default: break;
    }
    if (ch == '"') {
      std::string s;
      ++i;
      while (i < src.size() && src[i] != '"') {
        if (src[i] == '\n') fail("unterminated string");
        if (src[i] == '\\' && i + 1 < src.size()) ++i;
        s += src[i++];
      }
      if (i >= src.size()) fail("unterminated string");
      ++i;
      out.push_back({Tok::String, s, line});
      continue;
    }
    const bool numeric_start =
        std::isdigit(static_cast<unsigned char>(ch)) ||
        ((ch == '-' || ch == '+' || ch == '.') && i + 1 < src.size() &&
         (std::isdigit(static_cast<unsigned char>(src[i + 1])) || src[i + 1] == '.'));
    if (numeric_start) {
      const char* begin = src.c_str() + i;
      char* end = nullptr;
      std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      out.push_back({Tok::Number, std::string(begin, static_cast<const char*>(end)), line});
      i += static_cast<std::size_t>(end - begin);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' ||
                                src[j] == '.' || src[j] == '-' || src[j] == '/')) {
        ++j;
      }
      out.push_back({Tok::Word, src.substr(i, j - i), line});
      i = j;
      continue;
    }
    fail(std::string("unexpected character '") + ch + "'");
  }
  if (depth != 0) fail("unbalanced brackets at end of file");
  out.push_back({Tok::Newline, "", line});
  out.push_back({Tok::End, "", line});
  return out;
}

struct Value {
  enum class Kind { Number, Word, String, List, Call } kind = Kind::Number;
  std::string text;  // numbers keep their source text; words and strings their content
  double number = 0.0;
  std::vector<Value> items;
  std::vector<std::pair<std::string, Value>> args;
  int line = 0;
};

struct Entry {
  std::string key;
  Value value;
  int line;
};

struct Section {
  std::string name;
  std::vector<Entry> entries;
  int line;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  std::vector<Section> document() {
    std::vector<Section> sections;
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::Newline) {
        ++pos_;
        continue;
      }
      if (peek().kind == Tok::LBracket) {
        const int line = peek().line;
        ++pos_;
        const Token name = expect(Tok::Word, "section name");
        expect(Tok::RBracket, "']'");
        expect(Tok::Newline, "end of line after section header");
        for (const Section& s : sections) {
          if (s.name == name.text) fail(line, "duplicate section [" + name.text + "]");
        }
        sections.push_back({name.text, {}, line});
        continue;
      }
      if (sections.empty()) fail(peek().line, "key outside of any section");
      const Token key = next();
      if (key.kind != Tok::Word && key.kind != Tok::Number) fail(key.line, "expected a key");
      expect(Tok::Equals, "'=' after key '" + key.text + "'");
      Value v = value();
      expect(Tok::Newline, "end of line after value of '" + key.text + "'");
      Section& sec = sections.back();
      for (const Entry& e : sec.entries) {
        if (e.key == key.text) {
          fail(key.line, "[" + sec.name + "] duplicate key '" + key.text + "'");
        }
      }
      sec.entries.push_back({key.text, std::move(v), key.line});
    }
    return sections;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_++]; }

  [[noreturn]] static void fail(int line, const std::string& msg) {
    throw ValidationError("scenario line " + std::to_string(line) + ": " + msg);
  }

  Token expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) fail(peek().line, "expected " + what);
    return next();
  }

  Value value() {
    const Token t = next();
    Value v;
    v.line = t.line;
    switch (t.kind) {
      case Tok::Number:
        v.kind = Value::Kind::Number;
        v.text = t.text;
        v.number = std::strtod(t.text.c_str(), nullptr);
        return v;
      case Tok::String:
        v.kind = Value::Kind::String;
        v.text = t.text;
        return v;
      case Tok::Word:
        v.text = t.text;
        if (peek().kind == Tok::LParen) {
          ++pos_;
          v.kind = Value::Kind::Call;
          while (peek().kind != Tok::RParen) {
            const Token name = expect(Tok::Word, "argument name in " + t.text + "(...)");
            expect(Tok::Equals, "'=' after argument '" + name.text + "'");
            v.args.emplace_back(name.text, value());
            if (peek().kind != Tok::Comma) break;
            ++pos_;
          }
          expect(Tok::RParen, "')' closing " + t.text + "(...)");
        } else {
          v.kind = Value::Kind::Word;
        }
        return v;
      case Tok::LBracket:
        v.kind = Value::Kind::List;
        while (peek().kind != Tok::RBracket) {
          v.items.push_back(value());
          if (peek().kind != Tok::Comma) break;
          ++pos_;
        }
        expect(Tok::RBracket, "']' closing list");
        return v;
      default:
        fail(t.line, "expected a value");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Typed access

std::string where(const std::string& section, const std::string& key) {
  return "[" + section + "] " + key;
}

[[noreturn]] void bad(const std::string& section, const std::string& key, const std::string& msg) {
  throw ValidationError(where(section, key) + ": " + msg);
}

double as_number(const Value& v, const std::string& sec, const std::string& key) {
  if (v.kind != Value::Kind::Number) bad(sec, key, "expected a number");
  if (!std::isfinite(v.number)) bad(sec, key, "number must be finite");
  return v.number;
}

long long as_int(const Value& v, const std::string& sec, const std::string& key) {
  const double d = as_number(v, sec, key);
  if (d != std::floor(d) || std::abs(d) > 9.0e15) bad(sec, key, "expected an integer");
  return static_cast<long long>(d);
}

std::uint64_t as_u64(const Value& v, const std::string& sec, const std::string& key) {
  if (v.kind != Value::Kind::Number) bad(sec, key, "expected an unsigned integer");
  for (char c : v.text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) bad(sec, key, "expected an unsigned integer");
  }
  try {
    return std::stoull(v.text);
  } catch (const std::exception&) {
    bad(sec, key, "integer out of range");
  }
}

bool as_bool(const Value& v, const std::string& sec, const std::string& key) {
  if (v.kind == Value::Kind::Word && v.text == "true") return true;
  if (v.kind == Value::Kind::Word && v.text == "false") return false;
  bad(sec, key, "expected true or false");
}

std::string as_text(const Value& v, const std::string& sec, const std::string& key) {
  if (v.kind != Value::Kind::Word && v.kind != Value::Kind::String) {
    bad(sec, key, "expected a word or quoted string");
  }
  return v.text;
}

std::vector<double> as_number_list(const Value& v, const std::string& sec, const std::string& key) {
  if (v.kind == Value::Kind::Number) return {as_number(v, sec, key)};
  if (v.kind != Value::Kind::List) bad(sec, key, "expected a number or a list of numbers");
  std::vector<double> out;
  for (const Value& item : v.items) out.push_back(as_number(item, sec, key));
  return out;
}

Matrix as_matrix(const Value& v, const std::string& sec, const std::string& key) {
  if (v.kind != Value::Kind::List || v.items.empty()) bad(sec, key, "expected a list of rows");
  const std::size_t rows = v.items.size();
  std::size_t cols = 0;
  Matrix m;
  for (std::size_t r = 0; r < rows; ++r) {
    const Value& row = v.items[r];
    if (row.kind != Value::Kind::List || row.items.empty()) {
      bad(sec, key, "row " + std::to_string(r + 1) + " is not a nonempty list");
    }
    if (r == 0) {
      cols = row.items.size();
      m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    } else if (row.items.size() != cols) {
      bad(sec, key, "dimension mismatch: row " + std::to_string(r + 1) + " has " +
                        std::to_string(row.items.size()) + " entries, expected " +
                        std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = as_number(row.items[c], sec, key);
    }
  }
  return m;
}

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"model", {"A", "B"}},
      {"graph", {"vertices", "mode", "leader", "edges"}},
      {"protocol", {"variant", "phi", "initial_gains", "gain_seed", "gain_range"}},
      {"disturbances", {}},
      {"sim", {"x0", "state_seed", "state_range", "step", "t_end", "record_every"}},
      {"output", {"csv", "report", "summary", "plots"}},
      {"bounds", {"window", "leaderless_offset"}},
  };
  return s;
}

DisturbanceSpec parse_disturbance(const Value& v, const std::string& key, int n_vertices) {
  const std::string sec = "disturbances";
  if (v.kind == Value::Kind::Word && v.text == "zero") return {};
  if (v.kind != Value::Kind::Call) bad(sec, key, "expected a disturbance such as sine(amplitude = 0.2)");
  std::map<std::string, const Value*> args;
  for (const auto& [name, arg] : v.args) {
    if (!args.emplace(name, &arg).second) bad(sec, key, "duplicate argument '" + name + "'");
  }
  std::set<std::string> allowed{"channel"};
  const auto num = [&](const std::string& name, std::optional<double> fallback) {
    allowed.insert(name);
    const auto it = args.find(name);
    if (it == args.end()) {
      if (!fallback) bad(sec, key, v.text + "(...) requires '" + name + "'");
      return *fallback;
    }
    return as_number(*it->second, sec, key + "." + name);
  };
  DisturbanceSpec spec;
  if (v.text == "zero") {
    spec.shape = ZeroDisturbance{};
  } else if (v.text == "sine") {
    spec.shape = SineDisturbance{num("amplitude", {}), num("frequency", 1.0), num("phase", 0.0)};
  } else if (v.text == "cosine") {
    spec.shape = CosineDisturbance{num("amplitude", {}), num("frequency", 1.0)};
  } else if (v.text == "exp_decay") {
    spec.shape = ExpDecayDisturbance{num("amplitude", {}), num("rate", {})};
  } else if (v.text == "state_sine") {
    const double amplitude = num("amplitude", {});
    const double agent = num("agent", {});
    const double component = num("component", 1.0);
    if (agent != std::floor(agent) || agent < 1 || agent > n_vertices) {
      bad(sec, key, "state_sine agent must be a vertex index in 1.." + std::to_string(n_vertices));
    }
    if (component != std::floor(component) || component < 1) {
      bad(sec, key, "state_sine component must be a positive integer");
    }
    spec.shape = StateSineDisturbance{amplitude, static_cast<int>(agent) - 1,
                                      static_cast<int>(component) - 1};
  } else {
    bad(sec, key, "unknown disturbance kind '" + v.text + "'");
  }
  const double channel = num("channel", 1.0);
  if (channel != std::floor(channel) || channel < 1) bad(sec, key, "channel must be a positive integer");
  spec.channel = static_cast<int>(channel) - 1;
  for (const auto& [name, _] : args) {
    if (!allowed.count(name)) bad(sec, key, "unknown argument '" + name + "' for " + v.text);
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Serialization helpers

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + "]";
}

std::string fmt_matrix(const Matrix& m) {
  std::string s = "[";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    s += r ? ", [" : "[";
    for (Eigen::Index c = 0; c < m.cols(); ++c) s += (c ? ", " : "") + fmt(m(r, c));
    s += "]";
  }
  return s + "]";
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string fmt_disturbance(const DisturbanceSpec& d) {
  std::string body = std::visit(
      [](const auto& shape) -> std::string {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, ZeroDisturbance>) {
          return "zero(";
        } else if constexpr (std::is_same_v<T, SineDisturbance>) {
          return "sine(amplitude = " + fmt(shape.amplitude) + ", frequency = " +
                 fmt(shape.angular_frequency) + ", phase = " + fmt(shape.phase);
        } else if constexpr (std::is_same_v<T, CosineDisturbance>) {
          return "cosine(amplitude = " + fmt(shape.amplitude) + ", frequency = " +
                 fmt(shape.angular_frequency);
        } else if constexpr (std::is_same_v<T, ExpDecayDisturbance>) {
          return "exp_decay(amplitude = " + fmt(shape.amplitude) + ", rate = " + fmt(shape.rate);
        } else {
          return "state_sine(amplitude = " + fmt(shape.amplitude) +
                 ", agent = " + std::to_string(shape.source_agent + 1) +
                 ", component = " + std::to_string(shape.source_component + 1);
        }
      },
      d.shape);
  const bool empty_args = body.back() == '(';
  if (d.channel != 0) body += std::string(empty_args ? "" : ", ") + "channel = " + std::to_string(d.channel + 1);
  return body + ")";
}

bool same_matrix(const Matrix& x, const Matrix& y) {
  return x.rows() == y.rows() && x.cols() == y.cols() && (x.size() == 0 || x == y);
}

// Gains and states draw from independent streams of the same seed.
std::mt19937_64 seeded_stream(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32), stream};
  return std::mt19937_64(seq);
}

}  // namespace

bool ScenarioConfig::operator==(const ScenarioConfig& o) const {
  return same_matrix(a, o.a) && same_matrix(b, o.b) && vertices == o.vertices && mode == o.mode &&
         leader == o.leader && edges == o.edges && variant == o.variant && phi == o.phi &&
         initial_gains == o.initial_gains && gain_seed == o.gain_seed && gain_low == o.gain_low &&
         gain_high == o.gain_high && disturbances == o.disturbances && x0 == o.x0 &&
         state_seed == o.state_seed && state_range == o.state_range && sim == o.sim &&
         csv == o.csv && report == o.report && summary == o.summary && plots == o.plots &&
         window_fraction == o.window_fraction && leaderless_offset == o.leaderless_offset;
}

ScenarioConfig parse_scenario_config(const std::string& text) {
  const std::vector<Section> sections = Parser(lex(text)).document();
  std::map<std::string, const Section*> by_name;
  for (const Section& s : sections) {
    const auto it = schema().find(s.name);
    if (it == schema().end()) {
      throw ValidationError("scenario line " + std::to_string(s.line) + ": unknown section [" +
                            s.name + "]");
    }
    if (s.name != "disturbances") {
      for (const Entry& e : s.entries) {
        if (!it->second.count(e.key)) bad(s.name, e.key, "unknown key");
      }
    }
    by_name[s.name] = &s;
  }
  for (const char* required : {"model", "graph", "protocol", "sim"}) {
    if (!by_name.count(required)) {
      throw ValidationError(std::string("scenario: missing section [") + required + "]");
    }
  }
  const auto find = [&](const std::string& sec, const std::string& key) -> const Value* {
    const auto it = by_name.find(sec);
    if (it == by_name.end()) return nullptr;
    for (const Entry& e : it->second->entries)
      if (e.key == key) return &e.value;
    return nullptr;
  };
  const auto need = [&](const std::string& sec, const std::string& key) -> const Value& {
    const Value* v = find(sec, key);
    if (!v) bad(sec, key, "missing required key");
    return *v;
  };

  ScenarioConfig cfg;
  cfg.a = as_matrix(need("model", "A"), "model", "A");
  cfg.b = as_matrix(need("model", "B"), "model", "B");
  if (cfg.a.rows() != cfg.a.cols()) bad("model", "A", "dimension mismatch: A must be square");
  if (cfg.b.rows() != cfg.a.rows()) {
    bad("model", "B", "dimension mismatch: B has " + std::to_string(cfg.b.rows()) +
                          " rows but A is " + std::to_string(cfg.a.rows()) + "x" +
                          std::to_string(cfg.a.rows()));
  }

  const long long vertices = as_int(need("graph", "vertices"), "graph", "vertices");
  if (vertices < 1 || vertices > 100000) bad("graph", "vertices", "must be a positive count");
  cfg.vertices = static_cast<int>(vertices);
  const std::string mode = as_text(need("graph", "mode"), "graph", "mode");
  if (mode == "leader") {
    cfg.mode = Mode::Leader;
  } else if (mode == "leaderless") {
    cfg.mode = Mode::Leaderless;
  } else {
    bad("graph", "mode", "expected leader or leaderless");
  }
  if (const Value* v = find("graph", "leader")) {
    const long long leader = as_int(*v, "graph", "leader");
    if (leader < 1 || leader > cfg.vertices) bad("graph", "leader", "vertex index out of range");
    cfg.leader = static_cast<int>(leader) - 1;
  }
  {
    const Value& edges = need("graph", "edges");
    if (edges.kind != Value::Kind::List) bad("graph", "edges", "expected a list of [from, to, weight]");
    for (const Value& e : edges.items) {
      const std::vector<double> t = as_number_list(e, "graph", "edges");
      if (e.kind != Value::Kind::List || (t.size() != 2 && t.size() != 3)) {
        bad("graph", "edges", "each edge is [from, to] or [from, to, weight]");
      }
      for (int k = 0; k < 2; ++k) {
        if (t[k] != std::floor(t[k]) || t[k] < 1 || t[k] > cfg.vertices) {
          bad("graph", "edges", "edge endpoint " + fmt(t[k]) + " is not a vertex in 1.." +
                                    std::to_string(cfg.vertices));
        }
      }
      const double w = t.size() == 3 ? t[2] : 1.0;
      if (!(w >= 0.0)) bad("graph", "edges", "edge weights must be nonnegative");
      cfg.edges.push_back({static_cast<int>(t[0]) - 1, static_cast<int>(t[1]) - 1, w});
    }
  }

  cfg.variant = parse_variant(as_text(need("protocol", "variant"), "protocol", "variant"));
  if (const Value* v = find("protocol", "phi")) cfg.phi = as_number_list(*v, "protocol", "phi");
  if (const Value* v = find("protocol", "initial_gains")) {
    cfg.initial_gains = as_number_list(*v, "protocol", "initial_gains");
  }
  if (const Value* v = find("protocol", "gain_seed")) cfg.gain_seed = as_u64(*v, "protocol", "gain_seed");
  if (const Value* v = find("protocol", "gain_range")) {
    const std::vector<double> r = as_number_list(*v, "protocol", "gain_range");
    if (r.size() != 2 || !(r[0] >= 1.0) || !(r[1] >= r[0])) {
      bad("protocol", "gain_range", "expected [low, high] with 1 <= low <= high");
    }
    cfg.gain_low = r[0];
    cfg.gain_high = r[1];
  }
  if (cfg.initial_gains.empty() == !cfg.gain_seed.has_value()) {
    bad("protocol", "initial_gains", "give exactly one of initial_gains or gain_seed");
  }

  cfg.disturbances.assign(static_cast<std::size_t>(cfg.vertices), DisturbanceSpec{});
  if (const auto it = by_name.find("disturbances"); it != by_name.end()) {
    for (const Entry& e : it->second->entries) {
      char* end = nullptr;
      const long agent = std::strtol(e.key.c_str(), &end, 10);
      if (*end != '\0' || agent < 1 || agent > cfg.vertices) {
        bad("disturbances", e.key, "key must be an agent index in 1.." + std::to_string(cfg.vertices));
      }
      cfg.disturbances[static_cast<std::size_t>(agent - 1)] =
          parse_disturbance(e.value, e.key, cfg.vertices);
    }
  }

  if (const Value* v = find("sim", "x0")) cfg.x0 = as_number_list(*v, "sim", "x0");
  if (const Value* v = find("sim", "state_seed")) cfg.state_seed = as_u64(*v, "sim", "state_seed");
  if (const Value* v = find("sim", "state_range")) {
    cfg.state_range = as_number(*v, "sim", "state_range");
    if (!(cfg.state_range > 0.0)) bad("sim", "state_range", "must be positive");
  }
  if (cfg.x0.empty() == !cfg.state_seed.has_value()) {
    bad("sim", "x0", "give exactly one of x0 or state_seed");
  }
  if (const Value* v = find("sim", "step")) cfg.sim.step_h = as_number(*v, "sim", "step");
  cfg.sim.t_end = as_number(need("sim", "t_end"), "sim", "t_end");
  if (const Value* v = find("sim", "record_every")) {
    const long long every = as_int(*v, "sim", "record_every");
    if (every < 1) bad("sim", "record_every", "must be >= 1");
    cfg.sim.record_every = static_cast<int>(every);
  }
  if (!(cfg.sim.step_h > 0.0)) bad("sim", "step", "must be positive");
  if (!(cfg.sim.t_end > 0.0)) bad("sim", "t_end", "must be positive");

  if (const Value* v = find("output", "csv")) cfg.csv = as_text(*v, "output", "csv");
  if (const Value* v = find("output", "report")) cfg.report = as_text(*v, "output", "report");
  if (const Value* v = find("output", "summary")) cfg.summary = as_text(*v, "output", "summary");
  if (const Value* v = find("output", "plots")) cfg.plots = as_bool(*v, "output", "plots");

  if (const Value* v = find("bounds", "window")) {
    cfg.window_fraction = as_number(*v, "bounds", "window");
    if (!(cfg.window_fraction > 0.0 && cfg.window_fraction <= 1.0)) {
      bad("bounds", "window", "must lie in (0, 1]");
    }
  }
  if (const Value* v = find("bounds", "leaderless_offset")) {
    if (v->kind == Value::Kind::Word && v->text == "beta") {
      cfg.leaderless_offset.reset();
    } else {
      cfg.leaderless_offset = as_number(*v, "bounds", "leaderless_offset");
    }
  }
  return cfg;
}

ScenarioConfig load_scenario_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_config(ss.str());
}

std::string write_scenario_config(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "[model]\n";
  out << "A = " << fmt_matrix(cfg.a) << "\n";
  out << "B = " << fmt_matrix(cfg.b) << "\n\n";

  out << "[graph]\n";
  out << "vertices = " << cfg.vertices << "\n";
  out << "mode = " << (cfg.mode == Mode::Leader ? "leader" : "leaderless") << "\n";
  out << "leader = " << cfg.leader + 1 << "\n";
  out << "edges = [";
  for (std::size_t i = 0; i < cfg.edges.size(); ++i) {
    const Edge& e = cfg.edges[i];
    out << (i ? ", " : "") << "[" << e.from + 1 << ", " << e.to + 1 << ", " << fmt(e.weight) << "]";
  }
  out << "]\n\n";

  out << "[protocol]\n";
  out << "variant = " << to_string(cfg.variant) << "\n";
  if (!cfg.phi.empty()) out << "phi = " << fmt_list(cfg.phi) << "\n";
  if (!cfg.initial_gains.empty()) out << "initial_gains = " << fmt_list(cfg.initial_gains) << "\n";
  if (cfg.gain_seed) out << "gain_seed = " << *cfg.gain_seed << "\n";
  out << "gain_range = " << fmt_list({cfg.gain_low, cfg.gain_high}) << "\n\n";

  out << "[disturbances]\n";
  for (std::size_t i = 0; i < cfg.disturbances.size(); ++i) {
    if (cfg.disturbances[i] == DisturbanceSpec{}) continue;
    out << i + 1 << " = " << fmt_disturbance(cfg.disturbances[i]) << "\n";
  }
  out << "\n";

  out << "[sim]\n";
  if (!cfg.x0.empty()) out << "x0 = " << fmt_list(cfg.x0) << "\n";
  if (cfg.state_seed) out << "state_seed = " << *cfg.state_seed << "\n";
  out << "state_range = " << fmt(cfg.state_range) << "\n";
  out << "step = " << fmt(cfg.sim.step_h) << "\n";
  out << "t_end = " << fmt(cfg.sim.t_end) << "\n";
  out << "record_every = " << cfg.sim.record_every << "\n\n";

  out << "[output]\n";
  out << "csv = " << quote(cfg.csv) << "\n";
  out << "report = " << quote(cfg.report) << "\n";
  out << "summary = " << quote(cfg.summary) << "\n";
  out << "plots = " << (cfg.plots ? "true" : "false") << "\n\n";

  out << "[bounds]\n";
  out << "window = " << fmt(cfg.window_fraction) << "\n";
  out << "leaderless_offset = " << (cfg.leaderless_offset ? fmt(*cfg.leaderless_offset) : "beta")
      << "\n";
  return out.str();
}

Scenario build_scenario(const ScenarioConfig& cfg, const ScenarioOverrides& overrides) {
  Scenario s;
  s.model = AgentModel{cfg.a, cfg.b};
  s.model.validate();

  if (cfg.mode != mode_of(cfg.variant)) {
    throw ValidationError("[graph] mode is inconsistent with [protocol] variant '" +
                          std::string(to_string(cfg.variant)) + "'");
  }
  if (cfg.mode == Mode::Leader && cfg.leader != 0) {
    throw ValidationError("[graph] leader: the leader must be vertex 1");
  }
  s.graph = DirectedGraph::from_edges(cfg.vertices, cfg.edges);

  const int n_gains = cfg.mode == Mode::Leader ? cfg.vertices - 1 : cfg.vertices;
  if (n_gains < 1) throw ValidationError("[graph] vertices: need at least two agents");

  std::vector<double> phi = cfg.phi;
  if (phi.empty()) phi.assign(1, 0.0);
  if (phi.size() == 1) phi.assign(static_cast<std::size_t>(n_gains), phi.front());
  if (static_cast<int>(phi.size()) != n_gains) {
    bad("protocol", "phi", "expected 1 or " + std::to_string(n_gains) + " entries");
  }

  std::vector<double> gains = cfg.initial_gains;
  if (gains.empty()) {
    std::mt19937_64 rng = seeded_stream(overrides.seed.value_or(cfg.gain_seed.value_or(0)), 1);
    std::uniform_real_distribution<double> dist(cfg.gain_low, cfg.gain_high);
    gains.resize(static_cast<std::size_t>(n_gains));
    for (double& g : gains) g = dist(rng);
  }
  if (static_cast<int>(gains.size()) != n_gains) {
    bad("protocol", "initial_gains", "expected " + std::to_string(n_gains) + " entries");
  }
  s.protocol = ProtocolConfig::make(cfg.variant, std::move(phi), std::move(gains));

  s.disturbances = cfg.disturbances;
  if (static_cast<int>(s.disturbances.size()) != cfg.vertices) {
    s.disturbances.resize(static_cast<std::size_t>(cfg.vertices));
  }

  const Eigen::Index nx = static_cast<Eigen::Index>(cfg.vertices) * s.model.state_dim();
  if (cfg.x0.empty()) {
    std::mt19937_64 rng = seeded_stream(overrides.seed.value_or(cfg.state_seed.value_or(0)), 2);
    std::uniform_real_distribution<double> dist(-cfg.state_range, cfg.state_range);
    s.x0.resize(nx);
    for (Eigen::Index i = 0; i < nx; ++i) s.x0(i) = dist(rng);
  } else {
    if (static_cast<Eigen::Index>(cfg.x0.size()) != nx) {
      bad("sim", "x0", "dimension mismatch: expected " + std::to_string(nx) + " entries");
    }
    s.x0 = Eigen::Map<const Vector>(cfg.x0.data(), nx);
  }

  s.sim = cfg.sim;
  if (overrides.step) s.sim.step_h = *overrides.step;

  try {
    s.design = design_gains(s.model.a, s.model.b);
  } catch (const NumericalError& e) {
    throw ValidationError(std::string("[model] ARE has no stabilizing solution: ") + e.what());
  }
  s.validate();
  return s;
}

Scenario parse_scenario(const std::string& path, const ScenarioOverrides& overrides) {
  return build_scenario(load_scenario_config(path), overrides);
}

}  // namespace adacons
