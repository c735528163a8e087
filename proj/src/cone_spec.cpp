#include "conefact/cone_spec.hpp"

#include <cctype>
#include <limits>

#include "conefact/errors.hpp"

namespace conefact {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ConeStructure parse() {
    std::vector<BlockKind> blocks;
    term(blocks);
    skip_space();
    while (pos_ < text_.size()) {
      if (text_[pos_] != 'x') fail("expected 'x' between terms");
      ++pos_;
      term(blocks);
      skip_space();
    }
    return ConeStructure(std::move(blocks));
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("cone spec: " + what + " at position " + std::to_string(pos_), pos_);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void term(std::vector<BlockKind>& out) {
    skip_space();
    const std::size_t kind_pos = pos_;
    std::string kind;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) kind += text_[pos_++];
    if (kind.empty()) fail("expected kind 'orthant', 'soc' or 'psd'");
    if (kind != "orthant" && kind != "soc" && kind != "psd") {
      pos_ = kind_pos;
      fail("unknown kind '" + kind + "'");
    }
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != ':') fail("expected ':' after kind");
    ++pos_;
    const int size = integer("size");
    int copies = 1;
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '*') {
      ++pos_;
      copies = integer("copies");
    }
    for (int c = 0; c < copies; ++c) {
      if (kind == "orthant") out.push_back(BlockKind::orthant(size));
      else if (kind == "soc") out.push_back(BlockKind::soc(size));
      else out.push_back(BlockKind::sym(size));
    }
  }

  int integer(const char* what) {
    skip_space();
    const std::size_t start = pos_;
    long long value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + (text_[pos_] - '0');
      if (value > std::numeric_limits<int>::max()) {
        pos_ = start;
        fail(std::string(what) + " is too large");
      }
      ++pos_;
    }
    if (pos_ == start) fail(std::string("expected integer ") + what);
    if (value < 1) {
      pos_ = start;
      fail(std::string(what) + " must be >= 1");
    }
    return static_cast<int>(value);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

ConeStructure parse_cone_spec(std::string_view text) { return Parser(text).parse(); }

std::string format_cone_spec(const ConeStructure& structure) {
  std::string out;
  const auto& blocks = structure.blocks();
  for (std::size_t i = 0; i < blocks.size();) {
    std::size_t j = i;
    while (j < blocks.size() && blocks[j] == blocks[i]) ++j;
    if (!out.empty()) out += " x ";
    out += to_string(blocks[i]);
    if (j - i > 1) out += "*" + std::to_string(j - i);
    i = j;
  }
  return out;
}

}  // namespace conefact
