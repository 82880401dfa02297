#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ocfa/diagram.hpp"

namespace ocfa {

struct SourceSpan {
  size_t line = 1, column = 1, length = 1;
};

enum class ParseErrorKind { Syntax, Type, UnknownColor };

struct ParseError : std::runtime_error {
  ParseErrorKind kind;
  SourceSpan span;
  ParseError(ParseErrorKind k, SourceSpan s, const std::string& msg);
};

// declared colour set; empty means "take it from the file, else uncoloured"
struct ColorSet {
  std::vector<Color> names;
  bool any = false;  // accept every identifier (pattern variables in the rule catalog)
};

DiagramTerm parse(const std::string& text, const ColorSet& colors = {});

struct PrintOptions {
  bool window_macro = false;  // fold zip-over-cozip rows into window_w
};

std::string print(const DiagramTerm& t, const PrintOptions& opt = {});

// colours mentioned by the term's boundary and generators, sorted
std::vector<Color> colors_of(const DiagramTerm& t);

}  // namespace ocfa
