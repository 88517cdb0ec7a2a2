#pragma once

// Concrete syntax: lexer, parser and pretty-printer.
//
// Parseable surface grammar (see README for the full EBNF):
//   ?            dynamic type / dynamic row
//   .            empty row
//   lam x:A. M   term abstraction        Lam X:K. M  type abstraction
//   forall X:K. A
//   M @A         type application
//   {l=M; N}     record extension        let {l=x; y} = M in N
//   l M          injection (head identifier not bound as a variable)
//   l ^ A M      variant embedding
//   case M with <l x -> M1; y -> M2>
//   M : A        ascription
//   -- comment to end of line
//
// Casts, conversions and blame are printable only; the parser rejects them.

#include <stdexcept>
#include <string>

#include "ast.hpp"

namespace rowg {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg), line(line_), col(col_) {}
};

TypePtr parse_type(const std::string& src);
TermPtr parse_term(const std::string& src);
// Whole-file entry point: one term, trailing tokens rejected.
TermPtr parse_program(const std::string& src);

std::string pretty(const TypePtr& t);
std::string pretty(const TermPtr& t);
std::string pretty(const CorePtr& t);
std::string pretty(const ConstPtr& c);

// Replace every ascription (M : A) with (lam x:A. x) M.
TermPtr desugar(const TermPtr& t);

}  // namespace rowg
