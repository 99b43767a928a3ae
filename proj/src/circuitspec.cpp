#include "tribeam/circuitspec.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>
#include <system_error>

namespace tribeam::circuitspec {

namespace {

bool is_ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

bool is_ident_char(char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9') || c == '-';
}

bool is_ident(std::string_view s) {
  if (s.empty() || !is_ident_start(s[0])) return false;
  return std::all_of(s.begin(), s.end(), is_ident_char);
}

// A strict key: identifier without '-'.
bool is_key(std::string_view s) {
  if (s.empty() || !is_ident_start(s[0])) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
  });
}

bool is_number_start(char c) { return (c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.'; }

bool is_token_char(char c) {
  return is_ident_char(c) || (c >= '0' && c <= '9') || c == '.' || c == '+' || c == '=';
}

bool is_blank(char c) { return c == ' ' || c == '\t'; }

struct Token {
  std::string_view text;
  int line;    // 1-based
  int column;  // 1-based
};

struct Value {
  std::string_view text;
  int line;
  int column;
  bool numeric = false;
  double number = 0.0;
};

ParseError err(const Token& at, std::string message) {
  return {at.line, at.column, std::move(message), std::string(at.text)};
}

ParseError err_at(int line, int column, std::string message, std::string token = "") {
  return {line, column, std::move(message), std::move(token)};
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ParseResult run() {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text_.size()) {
      if (pos == text_.size() && line_no > 0) break;
      std::size_t eol = text_.find('\n', pos);
      std::string_view line = text_.substr(pos, eol == std::string_view::npos
                                                    ? text_.size() - pos
                                                    : eol - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      ++line_no;
      last_line_ = line_no;
      if (auto e = parse_line(line, line_no)) return *e;
      if (eol == std::string_view::npos) break;
      pos = eol + 1;
    }
    return finish();
  }

 private:
  std::optional<ParseError> parse_line(std::string_view line, int line_no) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      const char c = line[i];
      if (is_blank(c)) {
        ++i;
        continue;
      }
      if (c == '#') break;  // comment to end of line
      if (!is_token_char(c)) {
        return err_at(line_no, static_cast<int>(i) + 1, "invalid character in statement",
                      std::string(1, c));
      }
      const std::size_t start = i;
      while (i < line.size() && is_token_char(line[i])) ++i;
      tokens.push_back({line.substr(start, i - start), line_no, static_cast<int>(start) + 1});
    }
    if (tokens.empty()) return std::nullopt;  // blank or comment-only line
    // Errors about something missing at the end of a statement point at the
    // last character of the line so positions stay inside the input.
    return parse_statement(tokens, line_no, std::max<int>(1, static_cast<int>(line.size())));
  }

  std::optional<ParseError> parse_statement(const std::vector<Token>& tokens, int line_no,
                                            int eol_column) {
    const Token& head = tokens.front();
    if (head.text == "source") return parse_source(tokens, line_no, eol_column);
    if (head.text == "splitter") return parse_splitter(tokens, line_no, eol_column);
    if (head.text == "mirror") return parse_mirror(tokens, line_no, eol_column);
    if (head.text == "plc") return parse_plc(tokens, line_no, eol_column);
    if (head.text == "phase") return parse_phase(tokens, line_no, eol_column);
    if (head.text == "detector") return parse_detector(tokens, line_no, eol_column);
    if (head.text == "preset") return parse_preset(tokens, line_no, eol_column);
    return err(head, "unknown statement '" + std::string(head.text) + "'");
  }

  // --- token-level helpers -------------------------------------------------

  std::variant<Value, ParseError> parse_kv(const Token& tok, std::string_view expected_key) {
    const std::size_t eq = tok.text.find('=');
    if (eq == std::string_view::npos) {
      return err(tok, "expected " + std::string(expected_key) + "=<value>");
    }
    const std::string_view key = tok.text.substr(0, eq);
    const std::string_view value = tok.text.substr(eq + 1);
    if (!is_key(key)) return err(tok, "malformed key before '='");
    if (key != expected_key) {
      return err(tok, "unknown key '" + std::string(key) + "' (expected '" +
                          std::string(expected_key) + "')");
    }
    if (value.empty() || value.find('=') != std::string_view::npos) {
      return err(tok, "malformed value after '='");
    }
    Value out{value, tok.line, tok.column + static_cast<int>(eq) + 1, false, 0.0};
    if (is_number_start(value.front())) {
      double d = 0.0;
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), d);
      if (ec == std::errc::result_out_of_range) {
        return err_at(out.line, out.column, "number out of range", std::string(value));
      }
      if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(d)) {
        return err_at(out.line, out.column, "malformed number", std::string(value));
      }
      out.numeric = true;
      out.number = d;
    }
    return out;
  }

  std::variant<Value, ParseError> expect_number(const Token& tok, std::string_view key) {
    auto parsed = parse_kv(tok, key);
    if (auto* e = std::get_if<ParseError>(&parsed)) return *e;
    auto& v = std::get<Value>(parsed);
    if (!v.numeric) {
      return err_at(v.line, v.column, "expected a number for '" + std::string(key) + "'",
                    std::string(v.text));
    }
    return v;
  }

  std::optional<ParseError> check_arity(const std::vector<Token>& tokens, std::size_t want,
                                        int line_no, int eol_column, std::string_view usage) {
    if (tokens.size() > want) {
      return err(tokens[want], "unexpected token after " + std::string(usage));
    }
    if (tokens.size() < want) {
      return err_at(line_no, eol_column, "incomplete statement, expected " + std::string(usage));
    }
    return std::nullopt;
  }

  // --- statements ----------------------------------------------------------

  std::optional<ParseError> parse_source(const std::vector<Token>& tokens, int line_no,
                                         int eol_column) {
    if (auto e = check_arity(tokens, 3, line_no, eol_column, "'source w=<n> rate=<n>'")) return e;
    if (source_) return err(tokens[0], "duplicate source statement");
    std::optional<double> width, rate;
    for (std::size_t t = 1; t <= 2; ++t) {
      const Token& tok = tokens[t];
      const std::size_t eq = tok.text.find('=');
      const std::string_view key = eq == std::string_view::npos ? tok.text : tok.text.substr(0, eq);
      std::optional<double>* slot = nullptr;
      std::string_view name;
      if (key == "w") {
        slot = &width;
        name = "w";
      } else if (key == "rate") {
        slot = &rate;
        name = "rate";
      } else {
        return err(tok, "unknown key '" + std::string(key) + "' (expected 'w' or 'rate')");
      }
      if (slot->has_value()) return err(tok, "duplicate key '" + std::string(name) + "'");
      auto parsed = expect_number(tok, name);
      if (auto* e = std::get_if<ParseError>(&parsed)) return *e;
      const auto& v = std::get<Value>(parsed);
      if (v.number <= 0.0) {
        return err_at(v.line, v.column, std::string(name) + " out of range (must be > 0)",
                      std::string(v.text));
      }
      *slot = v.number;
    }
    source_ = Source{*width, *rate};
    return std::nullopt;
  }

  std::optional<ParseError> parse_splitter(const std::vector<Token>& tokens, int line_no,
                                           int eol_column) {
    if (tokens.size() < 2) {
      return err_at(line_no, eol_column, "incomplete statement, expected 'splitter <id> [ratio=<n>]'");
    }
    if (tokens.size() > 3) return err(tokens[3], "unexpected token after splitter statement");
    const Token& id = tokens[1];
    if (!is_ident(id.text)) return err(id, "malformed splitter id");
    for (const auto& s : splitters_) {
      if (s.id == id.text) return err(id, "duplicate splitter '" + std::string(id.text) + "'");
    }
    double ratio = 0.5;
    if (tokens.size() == 3) {
      auto parsed = expect_number(tokens[2], "ratio");
      if (auto* e = std::get_if<ParseError>(&parsed)) return *e;
      const auto& v = std::get<Value>(parsed);
      if (!(v.number > 0.0 && v.number < 1.0)) {
        return err_at(v.line, v.column, "ratio out of range (0, 1)", std::string(v.text));
      }
      ratio = v.number;
    }
    splitters_.push_back({std::string(id.text), ratio});
    return std::nullopt;
  }

  std::optional<ParseError> parse_mirror(const std::vector<Token>& tokens, int line_no,
                                         int eol_column) {
    if (auto e = check_arity(tokens, 3, line_no, eol_column, "'mirror <id> angle=<deg>'")) return e;
    const Token& id = tokens[1];
    if (!is_ident(id.text)) return err(id, "malformed mirror id");
    for (const auto& m : mirrors_) {
      if (m.id == id.text) return err(id, "duplicate mirror '" + std::string(id.text) + "'");
    }
    auto parsed = expect_number(tokens[2], "angle");
    if (auto* e = std::get_if<ParseError>(&parsed)) return *e;
    mirrors_.push_back({std::string(id.text), std::get<Value>(parsed).number});
    return std::nullopt;
  }

  std::optional<ParseError> parse_plc(const std::vector<Token>& tokens, int line_no,
                                      int eol_column) {
    if (auto e = check_arity(tokens, 3, line_no, eol_column, "'plc <leg> compensation=<n>'"))
      return e;
    const Token& leg = tokens[1];
    if (leg.text != "a" && leg.text != "b") {
      return err(leg, "unknown leg '" + std::string(leg.text) + "' (expected 'a' or 'b')");
    }
    for (const auto& p : plcs_) {
      if (p.leg == leg.text) return err(leg, "duplicate plc on leg '" + std::string(leg.text) + "'");
    }
    auto parsed = expect_number(tokens[2], "compensation");
    if (auto* e = std::get_if<ParseError>(&parsed)) return *e;
    plcs_.push_back({std::string(leg.text), std::get<Value>(parsed).number});
    return std::nullopt;
  }

  std::optional<ParseError> parse_phase(const std::vector<Token>& tokens, int line_no,
                                        int eol_column) {
    if (tokens.size() < 2) {
      return err_at(line_no, eol_column, "incomplete statement, expected 'phase <leg> [phi=<rad>]'");
    }
    if (tokens.size() > 3) return err(tokens[3], "unexpected token after phase statement");
    const Token& leg = tokens[1];
    if (leg.text != "a" && leg.text != "b") {
      return err(leg, "unknown leg '" + std::string(leg.text) + "' (expected 'a' or 'b')");
    }
    for (const auto& p : phase_shifters_) {
      if (p.leg == leg.text) {
        return err(leg, "duplicate phase shifter on leg '" + std::string(leg.text) + "'");
      }
    }
    double phi = 0.0;
    if (tokens.size() == 3) {
      auto parsed = expect_number(tokens[2], "phi");
      if (auto* e = std::get_if<ParseError>(&parsed)) return *e;
      phi = std::get<Value>(parsed).number;
    }
    phase_shifters_.push_back({std::string(leg.text), phi});
    return std::nullopt;
  }

  std::optional<ParseError> parse_detector(const std::vector<Token>& tokens, int line_no,
                                           int eol_column) {
    if (auto e = check_arity(tokens, 3, line_no, eol_column,
                             "'detector alice placement=<DA1|DA2>' or 'detector bob arm=<mode>'"))
      return e;
    const Token& who = tokens[1];
    if (who.text == "alice") {
      if (alice_) return err(who, "duplicate detector statement for alice");
      auto parsed = parse_kv(tokens[2], "placement");
      if (auto* e = std::get_if<ParseError>(&parsed)) return *e;
      const auto& v = std::get<Value>(parsed);
      if (v.text == "DA1") {
        alice_ = AlicePlacement::DA1;
      } else if (v.text == "DA2") {
        alice_ = AlicePlacement::DA2;
      } else {
        return err_at(v.line, v.column, "unknown placement (expected DA1 or DA2)",
                      std::string(v.text));
      }
      return std::nullopt;
    }
    if (who.text == "bob") {
      if (bob_arm_) return err(who, "duplicate detector statement for bob");
      auto parsed = parse_kv(tokens[2], "arm");
      if (auto* e = std::get_if<ParseError>(&parsed)) return *e;
      const auto& v = std::get<Value>(parsed);
      if (v.text != "a" && v.text != "b" && v.text != "h") {
        return err_at(v.line, v.column, "unknown arm (expected a, b or h)", std::string(v.text));
      }
      bob_arm_ = std::string(v.text);
      return std::nullopt;
    }
    return err(who, "unknown detector '" + std::string(who.text) + "' (expected alice or bob)");
  }

  std::optional<ParseError> parse_preset(const std::vector<Token>& tokens, int line_no,
                                         int eol_column) {
    if (auto e = check_arity(tokens, 2, line_no, eol_column, "'preset <name>'")) return e;
    const Token& name = tokens[1];
    if (name.text != "paper-fig1") {
      return err(name, "unknown preset '" + std::string(name.text) + "'");
    }
    preset_ = CircuitSpec::paper_fig1();
    return std::nullopt;
  }

  // --- final assembly ------------------------------------------------------

  ParseResult finish() {
    if (!preset_) {
      if (!source_) return err_at(last_line_, 1, "missing source statement");
      if (!alice_) return err_at(last_line_, 1, "missing detector alice statement");
      if (!bob_arm_) return err_at(last_line_, 1, "missing detector bob statement");
    }
    CircuitSpec spec = preset_ ? *preset_ : CircuitSpec{};
    if (source_) spec.source = *source_;
    if (alice_) spec.alice_placement = *alice_;
    if (bob_arm_) spec.bob_arm = *bob_arm_;
    merge_by_id(spec.splitters, splitters_,
                [](const Splitter& s) -> const std::string& { return s.id; });
    merge_by_id(spec.mirrors, mirrors_, [](const Mirror& m) -> const std::string& { return m.id; });
    merge_by_id(spec.plcs, plcs_, [](const Plc& p) -> const std::string& { return p.leg; });
    merge_by_id(spec.phase_shifters, phase_shifters_,
                [](const PhaseShifter& p) -> const std::string& { return p.leg; });
    return spec;
  }

  template <typename T, typename KeyFn>
  static void merge_by_id(std::vector<T>& base, const std::vector<T>& overrides, KeyFn key) {
    for (const auto& item : overrides) {
      auto it = std::find_if(base.begin(), base.end(),
                             [&](const T& b) { return key(b) == key(item); });
      if (it != base.end()) {
        *it = item;
      } else {
        base.push_back(item);
      }
    }
    std::sort(base.begin(), base.end(), [&](const T& x, const T& y) { return key(x) < key(y); });
  }

  std::string_view text_;
  int last_line_ = 1;

  std::optional<CircuitSpec> preset_;
  std::optional<Source> source_;
  std::vector<Splitter> splitters_;
  std::vector<Mirror> mirrors_;
  std::vector<Plc> plcs_;
  std::vector<PhaseShifter> phase_shifters_;
  std::optional<AlicePlacement> alice_;
  std::optional<std::string> bob_arm_;
};

}  // namespace

std::string_view to_string(AlicePlacement placement) {
  return placement == AlicePlacement::DA1 ? "DA1" : "DA2";
}

double CircuitSpec::fold_angle_deg() const {
  if (mirrors.empty()) return 60.0;
  double fold = mirrors.front().angle_deg;
  for (const auto& m : mirrors) fold = std::max(fold, m.angle_deg);
  return fold;
}

double CircuitSpec::phase_phi() const {
  double phi = 0.0;
  for (const auto& p : phase_shifters) {
    if (p.leg == "a") phi += p.phi;
    if (p.leg == "b") phi -= p.phi;
  }
  return phi;
}

double CircuitSpec::plc_compensation(std::string_view leg) const {
  double total = 0.0;
  for (const auto& p : plcs) {
    if (p.leg == leg) total += p.compensation;
  }
  return total;
}

const Splitter* CircuitSpec::find_splitter(std::string_view id) const {
  for (const auto& s : splitters) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

CircuitSpec CircuitSpec::paper_fig1() {
  CircuitSpec spec;
  spec.source = {1.0, 1.0};
  spec.splitters = {{"BS1", 0.5}, {"BS2", 0.5}};
  spec.alice_placement = AlicePlacement::DA2;
  spec.bob_arm = "h";
  return spec;
}

ParseResult parse(std::string_view text) { return Parser(text).run(); }

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return {buf, ptr};
}

std::string serialize(const CircuitSpec& spec) {
  std::ostringstream out;
  out << "source w=" << format_number(spec.source.width)
      << " rate=" << format_number(spec.source.rate) << '\n';
  for (const auto& s : spec.splitters) {
    out << "splitter " << s.id << " ratio=" << format_number(s.ratio) << '\n';
  }
  for (const auto& m : spec.mirrors) {
    out << "mirror " << m.id << " angle=" << format_number(m.angle_deg) << '\n';
  }
  for (const auto& p : spec.plcs) {
    out << "plc " << p.leg << " compensation=" << format_number(p.compensation) << '\n';
  }
  for (const auto& p : spec.phase_shifters) {
    out << "phase " << p.leg << " phi=" << format_number(p.phi) << '\n';
  }
  out << "detector alice placement=" << to_string(spec.alice_placement) << '\n';
  out << "detector bob arm=" << spec.bob_arm << '\n';
  return out.str();
}

std::vector<Violation> validate(const CircuitSpec& spec) {
  std::vector<Violation> out;
  const auto flag = [&out](std::string rule, std::string message) {
    out.push_back({std::move(rule), std::move(message)});
  };

  if (!(spec.source.width > 0.0) || !std::isfinite(spec.source.width)) {
    flag("source-width", "source width must be a positive finite length");
  }
  if (!(spec.source.rate > 0.0) || !std::isfinite(spec.source.rate)) {
    flag("source-rate", "source rate must be a positive finite count rate");
  }

  for (const auto& s : spec.splitters) {
    if (!(s.ratio > 0.0 && s.ratio < 1.0)) {
      flag("splitter-ratio", "splitter " + s.id + " has non-unitary ratio " +
                                 format_number(s.ratio) + " (must be in (0, 1))");
    }
    if (s.id != "BS1" && s.id != "BS2") {
      flag("splitter-id", "splitter " + s.id + " has no position in the two-splitter layout");
    }
  }
  const bool has_bs1 = spec.find_splitter("BS1") != nullptr;
  const bool has_bs2 = spec.find_splitter("BS2") != nullptr;
  if (!has_bs1) {
    flag("missing-bs1", "no splitter BS1: the source beam is never divided");
  }
  if (spec.alice_placement == AlicePlacement::DA2 && !has_bs2) {
    flag("missing-bs2", "placement DA2 needs both beams a and b, but splitter BS2 is absent");
  }

  if (spec.bob_arm != "h") {
    if (spec.bob_arm == "a" || spec.bob_arm == "b") {
      if (spec.alice_placement == AlicePlacement::DA2) {
        flag("bob-arm", "arm " + spec.bob_arm + " is consumed by the interference region");
      } else {
        flag("bob-arm", "arm " + spec.bob_arm + " is observed by the movable detector");
      }
    } else {
      flag("bob-arm", "unknown arm '" + spec.bob_arm + "'");
    }
  }

  const double fold = spec.fold_angle_deg();
  if (!(fold > 45.0 && fold < 90.0)) {
    flag("fold-angle", "fold angle " + format_number(fold) +
                           " degrees degenerates the interference region "
                           "(must lie strictly inside (45, 90))");
  }

  for (const auto& p : spec.plcs) {
    if (p.leg != "a" && p.leg != "b") flag("plc-leg", "plc on unknown leg '" + p.leg + "'");
  }
  for (const auto& p : spec.phase_shifters) {
    if (p.leg != "a" && p.leg != "b") {
      flag("phase-leg", "phase shifter on unknown leg '" + p.leg + "'");
    }
  }
  return out;
}

}  // namespace tribeam::circuitspec
