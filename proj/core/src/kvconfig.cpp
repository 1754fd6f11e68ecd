#include "intermarket/kvconfig.hpp"

#include "intermarket/common.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace intermarket {

namespace {

class LineParser {
 public:
  LineParser(std::string_view text, int line) : text_(text), line_(line) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::ConfigError, "line " + std::to_string(line_) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool at_end_or_comment() {
    skip_ws();
    return pos_ >= text_.size() || text_[pos_] == '#';
  }

  std::string parse_key() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
            text_[pos_] == '-' || text_[pos_] == '.')) {
      ++pos_;
    }
    if (start == pos_) fail("expected key");
    return std::string(text_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  KvValue parse_value() {
    skip_ws();
    if (pos_ >= text_.size()) fail("missing value");
    KvValue v;
    const char c = text_[pos_];
    if (c == '"') {
      v.kind = KvValue::Kind::String;
      v.s = parse_string();
    } else if (c == '[') {
      ++pos_;
      v.kind = KvValue::Kind::List;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == ']') {
        ++pos_;
        return v;
      }
      while (true) {
        v.list.push_back(parse_value());
        skip_ws();
        if (pos_ >= text_.size()) fail("unterminated list");
        if (text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (text_[pos_] == ']') {
          ++pos_;
          break;
        }
        fail("expected ',' or ']'");
      }
    } else {
      std::size_t start = pos_;
      while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' &&
             text_[pos_] != '#' && text_[pos_] != ' ' && text_[pos_] != '\t') {
        ++pos_;
      }
      std::string_view tok = text_.substr(start, pos_ - start);
      if (tok == "true" || tok == "false") {
        v.kind = KvValue::Kind::Bool;
        v.b = tok == "true";
      } else if (tok.find_first_of(".eE") == std::string_view::npos) {
        v.kind = KvValue::Kind::Int;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v.i);
        if (ec != std::errc{} || p != tok.data() + tok.size()) fail("bad value '" + std::string(tok) + "'");
      } else {
        v.kind = KvValue::Kind::Float;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v.f);
        if (ec != std::errc{} || p != tok.data() + tok.size()) fail("bad value '" + std::string(tok) + "'");
      }
    }
    return v;
  }

  std::string parse_string() {
    ++pos_;  // opening quote
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      char c = text_[pos_++];
      if (c == '\\') {
        if (pos_ >= text_.size()) fail("bad escape");
        char e = text_[pos_++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail("bad escape");
        }
      } else {
        out += c;
      }
    }
    if (pos_ >= text_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  std::size_t pos() const { return pos_; }
  void advance() { ++pos_; }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

 private:
  std::string_view text_;
  int line_;
  std::size_t pos_ = 0;
};

std::string kind_error(const std::string& key, const char* expected) {
  return "key '" + key + "' must be " + expected;
}

}  // namespace

std::string KvValue::as_string(const std::string& key) const {
  if (kind != Kind::String) throw Error(ErrorCode::ConfigError, kind_error(key, "a string"));
  return s;
}

std::int64_t KvValue::as_int(const std::string& key) const {
  if (kind != Kind::Int) throw Error(ErrorCode::ConfigError, kind_error(key, "an integer"));
  return i;
}

double KvValue::as_double(const std::string& key) const {
  if (kind == Kind::Int) return static_cast<double>(i);
  if (kind != Kind::Float) throw Error(ErrorCode::ConfigError, kind_error(key, "a number"));
  return f;
}

bool KvValue::as_bool(const std::string& key) const {
  if (kind != Kind::Bool) throw Error(ErrorCode::ConfigError, kind_error(key, "true or false"));
  return b;
}

std::vector<std::string> KvValue::as_string_list(const std::string& key) const {
  if (kind != Kind::List) throw Error(ErrorCode::ConfigError, kind_error(key, "a list"));
  std::vector<std::string> out;
  for (const auto& v : list) out.push_back(v.as_string(key));
  return out;
}

const KvValue* KvSection::find(const std::string& key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

KvDocument parse_kv(const std::string& text) {
  KvDocument doc;
  doc.sections.push_back(KvSection{});
  std::set<std::string> seen_sections;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    LineParser p(raw, line_no);
    if (p.at_end_or_comment()) continue;
    if (p.peek() == '[') {
      p.advance();
      std::string name = p.parse_key();
      p.expect(']');
      if (!p.at_end_or_comment()) p.fail("trailing text after section header");
      if (!seen_sections.insert(name).second) p.fail("duplicate section [" + name + "]");
      doc.sections.push_back(KvSection{name, line_no, {}});
      continue;
    }
    std::string key = p.parse_key();
    p.expect('=');
    KvValue value = p.parse_value();
    if (!p.at_end_or_comment()) p.fail("trailing text after value");
    auto& section = doc.sections.back();
    if (section.find(key) != nullptr) p.fail("duplicate key '" + key + "'");
    section.entries.emplace_back(std::move(key), std::move(value));
  }
  return doc;
}

KvDocument parse_kv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_kv(ss.str());
}

}  // namespace intermarket
