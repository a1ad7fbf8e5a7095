#include "eaqga/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "eaqga/errors.hpp"

namespace eaqga::toml {

namespace {

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;
  std::size_t line = 1;

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  char take() {
    char c = text[pos++];
    if (c == '\n') ++line;
    return c;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw DataError("TOML line " + std::to_string(line) + ": " + msg);
  }
  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) take();
  }
  void skip_ws_and_comment_to_eol() {
    skip_ws();
    if (!eof() && peek() == '#')
      while (!eof() && peek() != '\n') take();
    if (!eof()) {
      if (peek() != '\n') fail("unexpected trailing characters");
      take();
    }
  }
  void skip_blank() {  // whitespace, comments, newlines
    for (;;) {
      skip_ws();
      if (eof()) return;
      if (peek() == '#') {
        while (!eof() && peek() != '\n') take();
        continue;
      }
      if (peek() == '\n') {
        take();
        continue;
      }
      return;
    }
  }
};

bool is_bare_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::string parse_key(Cursor& cur) {
  cur.skip_ws();
  if (cur.eof()) cur.fail("expected a key");
  if (cur.peek() == '"') {
    cur.take();
    std::string key;
    while (!cur.eof() && cur.peek() != '"') key.push_back(cur.take());
    if (cur.eof()) cur.fail("unterminated quoted key");
    cur.take();
    return key;
  }
  std::string key;
  while (!cur.eof() && is_bare_key_char(cur.peek())) key.push_back(cur.take());
  if (key.empty()) cur.fail("expected a key");
  return key;
}

std::vector<std::string> parse_key_path(Cursor& cur) {
  std::vector<std::string> path;
  path.push_back(parse_key(cur));
  cur.skip_ws();
  while (!cur.eof() && cur.peek() == '.') {
    cur.take();
    path.push_back(parse_key(cur));
    cur.skip_ws();
  }
  return path;
}

Value parse_value(Cursor& cur);

Value parse_string(Cursor& cur) {
  cur.take();  // opening quote
  std::string out;
  while (!cur.eof() && cur.peek() != '"') {
    char c = cur.take();
    if (c == '\n') cur.fail("newline inside a basic string");
    if (c == '\\') {
      if (cur.eof()) cur.fail("dangling escape");
      char e = cur.take();
      switch (e) {
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case 'r': out.push_back('\r'); break;
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        default: cur.fail(std::string("unsupported escape \\") + e);
      }
    } else {
      out.push_back(c);
    }
  }
  if (cur.eof()) cur.fail("unterminated string");
  cur.take();
  return Value{out};
}

Value parse_array(Cursor& cur) {
  cur.take();  // '['
  Array arr;
  for (;;) {
    cur.skip_blank();
    if (cur.eof()) cur.fail("unterminated array");
    if (cur.peek() == ']') {
      cur.take();
      break;
    }
    arr.push_back(parse_value(cur));
    cur.skip_blank();
    if (cur.eof()) cur.fail("unterminated array");
    if (cur.peek() == ',') {
      cur.take();
      continue;
    }
    if (cur.peek() == ']') {
      cur.take();
      break;
    }
    cur.fail("expected ',' or ']' in array");
  }
  return Value{std::move(arr)};
}

Value parse_scalar(Cursor& cur) {
  std::string token;
  while (!cur.eof() && cur.peek() != '\n' && cur.peek() != '#' && cur.peek() != ',' &&
         cur.peek() != ']' && cur.peek() != ' ' && cur.peek() != '\t' && cur.peek() != '\r')
    token.push_back(cur.take());
  if (token.empty()) cur.fail("expected a value");
  if (token == "true") return Value{true};
  if (token == "false") return Value{false};

  const bool looks_float = token.find_first_of(".eE") != std::string::npos &&
                           token.find_first_not_of("+-0123456789.eE") == std::string::npos;
  if (!looks_float) {
    std::int64_t i = 0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), i);
    if (res.ec == std::errc() && res.ptr == token.data() + token.size()) return Value{i};
  }
  double d = 0.0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), d);
  if (res.ec == std::errc() && res.ptr == token.data() + token.size()) return Value{d};
  cur.fail("cannot parse value \"" + token + "\"");
}

Value parse_value(Cursor& cur) {
  cur.skip_ws();
  if (cur.eof()) cur.fail("expected a value");
  if (cur.peek() == '"') return parse_string(cur);
  if (cur.peek() == '[') return parse_array(cur);
  if (cur.peek() == '{') cur.fail("inline tables are not supported; use [section] headers");
  return parse_scalar(cur);
}

Table* descend(Table& root, const std::vector<std::string>& path, Cursor& cur,
               std::size_t depth) {
  Table* t = &root;
  for (std::size_t i = 0; i < depth; ++i) {
    auto [it, inserted] = t->try_emplace(path[i], Value{Table{}});
    Value& v = it->second;
    if (v.is_table()) {
      t = &std::get<Table>(v.v);
    } else if (v.is_array()) {
      auto& arr = std::get<Array>(v.v);
      if (arr.empty() || !arr.back().is_table())
        cur.fail("key \"" + path[i] + "\" is not a table");
      t = &std::get<Table>(arr.back().v);
    } else {
      cur.fail("key \"" + path[i] + "\" is not a table");
    }
  }
  return t;
}

}  // namespace

std::int64_t Value::as_int(const std::string& what) const {
  if (auto p = std::get_if<std::int64_t>(&v)) return *p;
  throw DataError("config value " + what + " must be an integer");
}

double Value::as_double(const std::string& what) const {
  if (auto p = std::get_if<double>(&v)) return *p;
  if (auto p = std::get_if<std::int64_t>(&v)) return static_cast<double>(*p);
  throw DataError("config value " + what + " must be a number");
}

bool Value::as_bool(const std::string& what) const {
  if (auto p = std::get_if<bool>(&v)) return *p;
  throw DataError("config value " + what + " must be a boolean");
}

const std::string& Value::as_string(const std::string& what) const {
  if (auto p = std::get_if<std::string>(&v)) return *p;
  throw DataError("config value " + what + " must be a string");
}

const Array& Value::as_array(const std::string& what) const {
  if (auto p = std::get_if<Array>(&v)) return *p;
  throw DataError("config value " + what + " must be an array");
}

const Table& Value::as_table(const std::string& what) const {
  if (auto p = std::get_if<Table>(&v)) return *p;
  throw DataError("config value " + what + " must be a table");
}

Table parse(const std::string& text) {
  Table root;
  Cursor cur{text};
  Table* current = &root;
  for (;;) {
    cur.skip_blank();
    if (cur.eof()) break;
    if (cur.peek() == '[') {
      cur.take();
      const bool array_of_tables = !cur.eof() && cur.peek() == '[';
      if (array_of_tables) cur.take();
      const auto path = parse_key_path(cur);
      cur.skip_ws();
      if (cur.eof() || cur.take() != ']') cur.fail("expected ']' after table header");
      if (array_of_tables) {
        if (cur.eof() || cur.take() != ']') cur.fail("expected ']]' after table-array header");
      }
      cur.skip_ws_and_comment_to_eol();
      Table* parent = descend(root, path, cur, path.size() - 1);
      auto [it, inserted] =
          parent->try_emplace(path.back(), array_of_tables ? Value{Array{}} : Value{Table{}});
      Value& v = it->second;
      if (array_of_tables) {
        if (!v.is_array()) cur.fail("key \"" + path.back() + "\" redefined as table array");
        std::get<Array>(v.v).push_back(Value{Table{}});
        current = &std::get<Table>(std::get<Array>(v.v).back().v);
      } else {
        if (!v.is_table()) cur.fail("key \"" + path.back() + "\" redefined as table");
        if (!inserted && !std::get<Table>(v.v).empty() && path.size() == 1) {
          // Re-opening [section] is tolerated; keys merge.
        }
        current = &std::get<Table>(v.v);
      }
      continue;
    }
    const auto path = parse_key_path(cur);
    cur.skip_ws();
    if (cur.eof() || cur.take() != '=') cur.fail("expected '=' after key");
    Value value = parse_value(cur);
    cur.skip_ws_and_comment_to_eol();
    Table* parent = descend(*current, path, cur, path.size() - 1);
    auto [it, inserted] = parent->try_emplace(path.back(), std::move(value));
    if (!inserted) cur.fail("duplicate key \"" + path.back() + "\"");
  }
  return root;
}

Table parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const Value* find(const Table& root, const std::string& dotted_path) {
  const Table* t = &root;
  std::size_t start = 0;
  for (;;) {
    const std::size_t dot = dotted_path.find('.', start);
    const std::string key = dotted_path.substr(start, dot == std::string::npos ? dot : dot - start);
    const auto it = t->find(key);
    if (it == t->end()) return nullptr;
    if (dot == std::string::npos) return &it->second;
    if (!it->second.is_table()) return nullptr;
    t = &std::get<Table>(it->second.v);
    start = dot + 1;
  }
}

}  // namespace eaqga::toml
