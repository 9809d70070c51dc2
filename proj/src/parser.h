/**
 * @file parser.h
 *
 * Parser for the surface dialect. The grammar is documented in
 * docs/dialect.md. Throws SyntaxError with line/column and the expected
 * token set on malformed input.
 */

#pragma once

#include <string_view>

#include "ast.h"

namespace dlc {

ast::Program parse(std::string_view source);

}  // namespace dlc
