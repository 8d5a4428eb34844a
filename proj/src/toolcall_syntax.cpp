// SPDX-License-Identifier: Apache-2.0
#include <charconv>
#include <cmath>
#include <cstdio>

#include "agentharness/toolcall.hpp"

namespace ah {

ToolCallSyntaxError::ToolCallSyntaxError(std::size_t position, const std::string& message)
    : std::runtime_error("tool-call syntax error at " + std::to_string(position) + ": " + message),
      position_(position),
      reason_(message) {}

namespace {

constexpr int kMaxDepth = 64;

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::vector<ToolCall> calls() {
    auto out = call_list();
    finish();
    return out;
  }

  std::vector<std::vector<ToolCall>> batches() {
    std::vector<std::vector<ToolCall>> out;
    while (true) {
      out.push_back(call_list());
      skip_ws();
      if (peek() != ',') break;
      ++pos_;
    }
    finish();
    return out;
  }

  Value whole_value() {
    skip_ws();
    Value v = value(0);
    finish();
    return v;
  }

 private:
  std::vector<ToolCall> call_list() {
    skip_ws();
    expect('[', "expected '[' to open the call list");
    std::vector<ToolCall> out;
    skip_ws();
    if (peek() == ']') {
      ++pos_;
    } else {
      while (true) {
        skip_ws();
        out.push_back(call());
        skip_ws();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        expect(']', "expected ',' or ']' after call");
        break;
      }
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& message) const { throw ToolCallSyntaxError(pos_, message); }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  bool at_end() const { return pos_ >= text_.size(); }

  void skip_ws() {
    while (!at_end() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                         text_[pos_] == '\r'))
      ++pos_;
  }

  void expect(char c, const char* message) {
    if (peek() != c || at_end()) fail(message);
    ++pos_;
  }

  void finish() {
    skip_ws();
    if (!at_end()) fail("unexpected trailing characters");
  }

  std::string ident() {
    if (!is_ident_start(peek()) || at_end()) fail("expected identifier");
    std::size_t start = pos_;
    while (!at_end() && is_ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string dotted_ident() {
    std::string name = ident();
    while (peek() == '.' && pos_ + 1 < text_.size() && is_ident_start(text_[pos_ + 1])) {
      ++pos_;
      name += '.';
      name += ident();
    }
    return name;
  }

  ToolCall call() {
    ToolCall c;
    c.function = dotted_ident();
    skip_ws();
    expect('(', "expected '(' after function name");
    skip_ws();
    if (peek() == ')') {
      ++pos_;
      return c;
    }
    while (true) {
      skip_ws();
      std::size_t name_pos = pos_;
      std::string name = ident();
      skip_ws();
      expect('=', "expected '=' after argument name");
      skip_ws();
      Value v = value(0);
      for (const auto& [existing, unused] : c.arguments) {
        if (existing == name) {
          pos_ = name_pos;
          fail("duplicate argument '" + name + "'");
        }
      }
      c.arguments.emplace_back(std::move(name), std::move(v));
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      expect(')', "expected ',' or ')' in argument list");
      return c;
    }
  }

  Value value(int depth) {
    if (depth > kMaxDepth) fail("value nesting too deep");
    if (at_end()) fail("expected value");
    char c = peek();
    if (c == '"' || c == '\'') return Value(string_literal());
    if (c == '[') return list(depth);
    if (c == '{') return map(depth);
    if (c == '-' || is_digit(c)) return number();
    if (is_ident_start(c)) {
      std::size_t start = pos_;
      std::string word = ident();
      if (word == "True" || word == "true") return Value(true);
      if (word == "False" || word == "false") return Value(false);
      if (word == "None" || word == "null") return Value(nullptr);
      pos_ = start;
      fail("unquoted identifier '" + word + "' is not a value");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string string_literal() {
    char quote = text_[pos_++];
    std::string out;
    while (true) {
      if (at_end()) fail("unterminated string");
      char c = text_[pos_++];
      if (c == quote) return out;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (at_end()) fail("unterminated escape");
      char e = text_[pos_++];
      switch (e) {
        case '"': out.push_back('"'); break;
        case '\'': out.push_back('\''); break;
        case '\\': out.push_back('\\'); break;
        case '/': out.push_back('/'); break;
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case 'r': out.push_back('\r'); break;
        case 'b': out.push_back('\b'); break;
        case 'f': out.push_back('\f'); break;
        case 'u': {
          if (pos_ + 4 > text_.size()) fail("short \\u escape");
          std::uint32_t cp = 0;
          auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + pos_ + 4, cp, 16);
          if (ec != std::errc{} || ptr != text_.data() + pos_ + 4) fail("bad \\u escape");
          pos_ += 4;
          append_utf8(out, cp);
          break;
        }
        default:
          --pos_;
          fail(std::string("unknown escape '\\") + e + "'");
      }
    }
  }

  Value number() {
    std::size_t start = pos_;
    bool floating = false;
    if (peek() == '-') ++pos_;
    if (!is_digit(peek()) || at_end()) fail("expected digits");
    while (!at_end() && is_digit(text_[pos_])) ++pos_;
    if (peek() == '.' && !at_end()) {
      floating = true;
      ++pos_;
      if (!is_digit(peek()) || at_end()) fail("expected digits after '.'");
      while (!at_end() && is_digit(text_[pos_])) ++pos_;
    }
    if ((peek() == 'e' || peek() == 'E') && !at_end()) {
      floating = true;
      ++pos_;
      if (peek() == '+' || peek() == '-') ++pos_;
      if (!is_digit(peek()) || at_end()) fail("expected exponent digits");
      while (!at_end() && is_digit(text_[pos_])) ++pos_;
    }
    if (is_ident_start(peek()) && !at_end()) fail("malformed number");
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    if (floating) {
      double d = 0;
      auto [ptr, ec] = std::from_chars(first, last, d);
      if (ec != std::errc{} || ptr != last || !std::isfinite(d)) {
        pos_ = start;
        fail("float literal out of range");
      }
      return Value(d);
    }
    std::int64_t i = 0;
    auto [ptr, ec] = std::from_chars(first, last, i);
    if (ec != std::errc{} || ptr != last) {
      pos_ = start;
      fail("integer literal out of range");
    }
    return Value(i);
  }

  Value list(int depth) {
    ++pos_;
    Value::List items;
    skip_ws();
    if (peek() == ']') {
      ++pos_;
      return Value(std::move(items));
    }
    while (true) {
      skip_ws();
      items.push_back(value(depth + 1));
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      expect(']', "expected ',' or ']' in list");
      return Value(std::move(items));
    }
  }

  Value map(int depth) {
    ++pos_;
    Value::Map entries;
    skip_ws();
    if (peek() == '}') {
      ++pos_;
      return Value(std::move(entries));
    }
    while (true) {
      skip_ws();
      if (peek() != '"' && peek() != '\'') fail("expected quoted key");
      std::size_t key_pos = pos_;
      std::string key = string_literal();
      for (const auto& [existing, unused] : entries) {
        if (existing == key) {
          pos_ = key_pos;
          fail("duplicate key '" + key + "'");
        }
      }
      skip_ws();
      expect(':', "expected ':' after key");
      skip_ws();
      entries.emplace_back(std::move(key), value(depth + 1));
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      expect('}', "expected ',' or '}' in map");
      return Value(std::move(entries));
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void render_string(std::string& out, const std::string& s) {
  out.push_back('"');
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(c));
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

void render_into(std::string& out, const Value& v) {
  switch (v.kind()) {
    case Value::Kind::null: out += "None"; break;
    case Value::Kind::boolean: out += v.as_bool() ? "True" : "False"; break;
    case Value::Kind::integer: out += std::to_string(v.as_int()); break;
    case Value::Kind::floating: {
      char buf[64];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v.as_number());
      std::string s(buf, ptr);
      if (s.find_first_of(".eE") == std::string::npos) s += ".0";
      out += s;
      break;
    }
    case Value::Kind::string: render_string(out, v.as_string()); break;
    case Value::Kind::list: {
      out.push_back('[');
      bool first = true;
      for (const auto& item : v.as_list()) {
        if (!first) out += ", ";
        first = false;
        render_into(out, item);
      }
      out.push_back(']');
      break;
    }
    case Value::Kind::map: {
      out.push_back('{');
      bool first = true;
      for (const auto& [key, item] : v.as_map()) {
        if (!first) out += ", ";
        first = false;
        render_string(out, key);
        out += ": ";
        render_into(out, item);
      }
      out.push_back('}');
      break;
    }
  }
}

}  // namespace

std::vector<ToolCall> parse_tool_calls(std::string_view text) { return Parser(text).calls(); }

std::optional<std::vector<ToolCall>> try_parse_tool_calls(std::string_view text) {
  try {
    return Parser(text).calls();
  } catch (const ToolCallSyntaxError&) {
    return std::nullopt;
  }
}

std::vector<std::vector<ToolCall>> parse_batch_sequence(std::string_view text) {
  return Parser(text).batches();
}

Value parse_value_literal(std::string_view text) { return Parser(text).whole_value(); }

std::string render_value(const Value& value) {
  std::string out;
  render_into(out, value);
  return out;
}

std::string render_tool_call(const ToolCall& call) {
  std::string out = call.function;
  out.push_back('(');
  bool first = true;
  for (const auto& [name, value] : call.arguments) {
    if (!first) out += ", ";
    first = false;
    out += name;
    out.push_back('=');
    render_into(out, value);
  }
  out.push_back(')');
  return out;
}

std::string render_tool_calls(const std::vector<ToolCall>& calls) {
  std::string out = "[";
  for (std::size_t i = 0; i < calls.size(); ++i) {
    if (i) out += ", ";
    out += render_tool_call(calls[i]);
  }
  out.push_back(']');
  return out;
}

}  // namespace ah
