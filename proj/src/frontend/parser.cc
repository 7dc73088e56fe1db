// Copyright 2026 The ArrayFree Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cctype>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "arrayfree/frontend.h"

namespace arrayfree {

std::string Diagnostic::ToString() const {
  const char* kind_name = kind == DiagnosticKind::kSyntax  ? "syntax error"
                          : kind == DiagnosticKind::kType ? "type error"
                                                          : "unsupported";
  std::string out =
      absl::StrCat(span.line, ":", span.column, ": ", kind_name, ": ", message);
  if (!expected.empty()) {
    absl::StrAppend(&out, " (expected ", absl::StrJoin(expected, " or "), ")");
  }
  return out;
}

NdNaming NdNaming::FromPrefix(const std::string& prefix) {
  return NdNaming{prefix, prefix + "_range"};
}

namespace {

enum class Tok {
  kIdent,
  kNumber,
  kPunct,
  kEnd,
};

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  std::uint64_t value = 0;
  bool unsigned_suffix = false;
  SourceSpan span;
};

struct LexError {
  SourceSpan span;
  std::string message;
};

// Splits source into tokens. Comments and preprocessor lines are dropped.
bool Lex(std::string_view src, std::vector<Token>* out, LexError* error) {
  int line = 1;
  int col = 1;
  size_t i = 0;
  bool line_start = true;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
        line_start = true;
      } else {
        ++col;
      }
    }
  };
  static const char* kPuncts[] = {"&&", "||", "==", "!=", "<=", ">=", "++",
                                  "--", "+=", "-=", "->", "(",  ")",  "{",
                                  "}",  "[",  "]",  ";",  ",",  ".",  "=",
                                  "<",  ">",  "+",  "-",  "*",  "/",  "%",
                                  "!",  "?",  ":",  "&",  "|",  "^",  "~"};
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (line_start && c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    line_start = false;
    if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (src.substr(i, 2) == "/*") {
      SourceSpan start{line, col};
      advance(2);
      while (i < src.size() && src.substr(i, 2) != "*/") advance(1);
      if (i >= src.size()) {
        *error = {start, "unterminated comment"};
        return false;
      }
      advance(2);
      continue;
    }
    Token tok;
    tok.span = {line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                                src[j] == '_')) {
        ++j;
      }
      tok.kind = Tok::kIdent;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out->push_back(std::move(tok));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      int base = 10;
      if (c == '0' && j + 1 < src.size() && (src[j + 1] == 'x' || src[j + 1] == 'X')) {
        base = 16;
        j += 2;
      }
      std::uint64_t value = 0;
      bool overflow = false;
      size_t digits = 0;
      while (j < src.size()) {
        char d = src[j];
        int v;
        if (std::isdigit(static_cast<unsigned char>(d))) {
          v = d - '0';
        } else if (base == 16 && std::isxdigit(static_cast<unsigned char>(d))) {
          v = std::tolower(d) - 'a' + 10;
        } else {
          break;
        }
        if (value > (std::numeric_limits<std::uint64_t>::max() - v) / base) {
          overflow = true;
        }
        value = value * base + v;
        ++j;
        ++digits;
      }
      if (digits == 0 || overflow) {
        *error = {tok.span, "malformed integer literal"};
        return false;
      }
      while (j < src.size() && (src[j] == 'u' || src[j] == 'U' ||
                                src[j] == 'l' || src[j] == 'L')) {
        if (src[j] == 'u' || src[j] == 'U') tok.unsigned_suffix = true;
        ++j;
      }
      if (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                             src[j] == '.')) {
        *error = {tok.span, "malformed integer literal"};
        return false;
      }
      tok.kind = Tok::kNumber;
      tok.value = value;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out->push_back(std::move(tok));
      continue;
    }
    bool matched = false;
    for (const char* p : kPuncts) {
      std::string_view sv(p);
      if (src.substr(i, sv.size()) == sv) {
        tok.kind = Tok::kPunct;
        tok.text = std::string(sv);
        advance(sv.size());
        out->push_back(std::move(tok));
        matched = true;
        break;
      }
    }
    if (!matched) {
      *error = {tok.span, absl::StrCat("unexpected character '",
                                       std::string(1, c), "'")};
      return false;
    }
  }
  Token end;
  end.kind = Tok::kEnd;
  end.span = {line, col};
  out->push_back(end);
  return true;
}

// Thrown internally to unwind on the first error; never escapes Parse().
struct ParseFailure {};

// Static shape of an expression, used for type checking.
enum class Shape { kScalar, kRecord, kArray };

class Parser {
 public:
  Parser(std::vector<Token> tokens, const ParseOptions& options)
      : tokens_(std::move(tokens)), options_(options) {}

  ParseResult Run() {
    ParseResult result;
    try {
      Program program = ParseProgram();
      result.program = std::move(program);
    } catch (const ParseFailure&) {
      result.diagnostics = std::move(diagnostics_);
    }
    return result;
  }

 private:
  const Token& Peek(size_t ahead = 0) const {
    size_t k = pos_ + ahead;
    return k < tokens_.size() ? tokens_[k] : tokens_.back();
  }
  bool IsPunct(std::string_view p, size_t ahead = 0) const {
    const Token& t = Peek(ahead);
    return t.kind == Tok::kPunct && t.text == p;
  }
  bool IsIdent(std::string_view word, size_t ahead = 0) const {
    const Token& t = Peek(ahead);
    return t.kind == Tok::kIdent && t.text == word;
  }
  const Token& Next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void Fail(DiagnosticKind kind, SourceSpan span,
                         std::string message,
                         std::vector<std::string> expected = {}) {
    diagnostics_.push_back(
        Diagnostic{kind, span, std::move(message), std::move(expected)});
    throw ParseFailure{};
  }
  [[noreturn]] void Unexpected(std::vector<std::string> expected) {
    const Token& t = Peek();
    std::string found = t.kind == Tok::kEnd ? "end of input"
                                            : absl::StrCat("'", t.text, "'");
    Fail(DiagnosticKind::kSyntax, t.span, absl::StrCat("unexpected ", found),
         std::move(expected));
  }
  void Expect(std::string_view punct) {
    if (!IsPunct(punct)) Unexpected({absl::StrCat("'", std::string(punct), "'")});
    Next();
  }
  bool Accept(std::string_view punct) {
    if (!IsPunct(punct)) return false;
    Next();
    return true;
  }

  static bool IsUnsupportedKeyword(const std::string& word) {
    static const std::set<std::string> kWords = {
        "while", "do",     "switch", "goto",   "return", "break",
        "continue", "case", "default", "float", "double", "long",
        "short", "char",   "typedef", "union", "enum",   "static",
        "extern", "const", "volatile", "sizeof", "_Bool", "bool"};
    return kWords.count(word) > 0;
  }
  bool IsReserved(const std::string& word) const {
    static const std::set<std::string> kWords = {
        "int", "unsigned", "signed", "struct", "for", "if", "else",
        "assert", "main", "void"};
    return kWords.count(word) > 0 || IsUnsupportedKeyword(word) ||
           word == options_.nd.unbounded || word == options_.nd.ranged;
  }

  std::string ExpectName(const char* what) {
    const Token& t = Peek();
    if (t.kind != Tok::kIdent) Unexpected({what});
    if (IsUnsupportedKeyword(t.text)) {
      Fail(DiagnosticKind::kUnsupported, t.span,
           absl::StrCat("'", t.text, "' is not supported"));
    }
    if (IsReserved(t.text)) Unexpected({what});
    return Next().text;
  }

  // ---- declarations ------------------------------------------------------

  bool AtTypeStart() const {
    return IsIdent("int") || IsIdent("unsigned") || IsIdent("signed") ||
           IsIdent("struct") || IsIdent("void");
  }

  bool AtMainDefinition() const {
    if (IsIdent("main") && IsPunct("(", 1)) return true;
    return (IsIdent("int") || IsIdent("void")) && IsIdent("main", 1);
  }

  // Parses `int`, `unsigned [int]`, `signed [int]`.
  ScalarType ParseScalarType() {
    const Token& t = Peek();
    if (IsIdent("int")) {
      Next();
      return ScalarType::kInt;
    }
    if (IsIdent("unsigned") || IsIdent("signed")) {
      bool is_unsigned = t.text == "unsigned";
      Next();
      if (IsIdent("int")) Next();
      return is_unsigned ? ScalarType::kUnsigned : ScalarType::kInt;
    }
    if (t.kind == Tok::kIdent && IsUnsupportedKeyword(t.text)) {
      Fail(DiagnosticKind::kUnsupported, t.span,
           absl::StrCat("type '", t.text, "' is not supported"));
    }
    Unexpected({"'int'", "'unsigned'"});
  }

  void ParseStructBody(const std::string& name, SourceSpan span) {
    if (program_.FindStruct(name) != nullptr) {
      Fail(DiagnosticKind::kType, span,
           absl::StrCat("redefinition of struct '", name, "'"));
    }
    Expect("{");
    StructDef def;
    def.name = name;
    def.span = span;
    while (!IsPunct("}")) {
      if (IsIdent("struct")) {
        Fail(DiagnosticKind::kUnsupported, Peek().span,
             "nested struct fields are not supported");
      }
      ScalarType type = ParseScalarType();
      while (true) {
        if (IsPunct("*")) {
          Fail(DiagnosticKind::kUnsupported, Peek().span,
               "pointers are not supported");
        }
        SourceSpan field_span = Peek().span;
        std::string field = ExpectName("field name");
        if (IsPunct("[")) {
          Fail(DiagnosticKind::kUnsupported, Peek().span,
               "array-typed struct fields are not supported");
        }
        for (const StructField& f : def.fields) {
          if (f.name == field) {
            Fail(DiagnosticKind::kType, field_span,
                 absl::StrCat("duplicate field '", field, "'"));
          }
        }
        def.fields.push_back({field, type});
        if (!Accept(",")) break;
      }
      Expect(";");
    }
    Expect("}");
    if (def.fields.empty()) {
      Fail(DiagnosticKind::kType, span,
           absl::StrCat("struct '", name, "' has no fields"));
    }
    program_.structs.push_back(std::move(def));
  }

  void ParseDeclaration() {
    SourceSpan start = Peek().span;
    std::optional<std::string> record;
    ScalarType scalar = ScalarType::kInt;
    if (IsIdent("void")) {
      Fail(DiagnosticKind::kUnsupported, start,
           "only 'main' may be declared with 'void'");
    }
    if (IsIdent("struct")) {
      Next();
      SourceSpan name_span = Peek().span;
      std::string name = ExpectName("struct name");
      if (IsPunct("{")) {
        ParseStructBody(name, name_span);
      } else if (program_.FindStruct(name) == nullptr) {
        Fail(DiagnosticKind::kType, name_span,
             absl::StrCat("unknown struct '", name, "'"));
      }
      if (Accept(";")) return;  // bare struct definition
      record = name;
    } else {
      scalar = ParseScalarType();
    }
    while (true) {
      if (IsPunct("*")) {
        Fail(DiagnosticKind::kUnsupported, Peek().span,
             "pointers are not supported");
      }
      SourceSpan name_span = Peek().span;
      if (IsIdent("main")) {
        Fail(DiagnosticKind::kUnsupported, name_span,
             "'main' must be the last definition");
      }
      std::string name = ExpectName("variable name");
      if (IsPunct("(")) {
        Fail(DiagnosticKind::kUnsupported, Peek().span,
             "functions other than main are not supported");
      }
      VarDecl decl;
      decl.name = name;
      decl.scalar = scalar;
      decl.record = record;
      decl.span = name_span;
      if (Accept("[")) {
        const Token& size_tok = Peek();
        if (size_tok.kind != Tok::kNumber) {
          if (IsPunct("]")) {
            Fail(DiagnosticKind::kUnsupported, size_tok.span,
                 "arrays need a constant size");
          }
          Fail(DiagnosticKind::kUnsupported, size_tok.span,
               "array size must be an integer literal");
        }
        Next();
        if (size_tok.value < 1) {
          Fail(DiagnosticKind::kType, size_tok.span,
               "array size must be at least 1");
        }
        if (size_tok.value > (std::uint64_t{1} << 31)) {
          Fail(DiagnosticKind::kType, size_tok.span, "array size too large");
        }
        decl.size = size_tok.value;
        Expect("]");
        if (IsPunct("[")) {
          Fail(DiagnosticKind::kUnsupported, Peek().span,
               "multi-dimensional arrays are not supported");
        }
      }
      if (IsPunct("=")) {
        Fail(DiagnosticKind::kUnsupported, Peek().span,
             "initializers are not supported; assign in the body");
      }
      if (program_.FindDecl(name) != nullptr ||
          program_.FindStruct(name) != nullptr) {
        Fail(DiagnosticKind::kType, name_span,
             absl::StrCat("redeclaration of '", name, "'"));
      }
      program_.decls.push_back(std::move(decl));
      if (!Accept(",")) break;
    }
    Expect(";");
  }

  // ---- program -----------------------------------------------------------

  Program ParseProgram() {
    while (AtTypeStart() && !AtMainDefinition()) ParseDeclaration();
    std::vector<StmtPtr> stmts;
    SourceSpan body_span = Peek().span;
    if (AtMainDefinition()) {
      if (!IsIdent("main")) Next();
      Next();  // main
      Expect("(");
      if (IsIdent("void")) Next();
      Expect(")");
      body_span = Peek().span;
      Expect("{");
      while (AtTypeStart()) ParseDeclaration();
      while (!IsPunct("}")) {
        if (Peek().kind == Tok::kEnd) Unexpected({"'}'"});
        stmts.push_back(ParseStatement());
      }
      Expect("}");
      if (Peek().kind != Tok::kEnd) Unexpected({"end of input"});
    } else {
      while (Peek().kind != Tok::kEnd) {
        if (AtTypeStart()) {
          Fail(DiagnosticKind::kSyntax, Peek().span,
               "declarations must precede statements");
        }
        stmts.push_back(ParseStatement());
      }
    }
    program_.body = MakeBlock(std::move(stmts), body_span);
    return std::move(program_);
  }

  // ---- statements --------------------------------------------------------

  StmtPtr ParseBody() {
    if (IsPunct("{")) return ParseStatement();
    SourceSpan span = Peek().span;
    StmtPtr single = ParseStatement();
    if (const auto* block = std::get_if<Block>(&single->node);
        block != nullptr && block->stmts.empty()) {
      return single;
    }
    return MakeBlock({single}, span);
  }

  StmtPtr ParseStatement() {
    const Token& t = Peek();
    SourceSpan span = t.span;
    if (t.kind == Tok::kIdent && IsUnsupportedKeyword(t.text)) {
      Fail(DiagnosticKind::kUnsupported, span,
           absl::StrCat("'", t.text, "' statements are not supported"));
    }
    if (Accept("{")) {
      std::vector<StmtPtr> stmts;
      while (!IsPunct("}")) {
        if (Peek().kind == Tok::kEnd) Unexpected({"'}'"});
        if (AtTypeStart()) {
          Fail(DiagnosticKind::kUnsupported, Peek().span,
               "declarations inside blocks are not supported");
        }
        stmts.push_back(ParseStatement());
      }
      Expect("}");
      return MakeBlock(std::move(stmts), span);
    }
    if (Accept(";")) return MakeBlock({}, span);
    if (IsIdent("if")) {
      Next();
      Expect("(");
      ExprPtr cond = ParseScalarExpr();
      Expect(")");
      StmtPtr then = ParseBody();
      StmtPtr otherwise;
      if (IsIdent("else")) {
        Next();
        otherwise = ParseBody();
      }
      return MakeIf(std::move(cond), std::move(then), std::move(otherwise),
                    span);
    }
    if (IsIdent("for")) return ParseFor();
    if (IsIdent("assert")) {
      Next();
      Expect("(");
      ExprPtr cond = ParseScalarExpr();
      Expect(")");
      Expect(";");
      return MakeAssert(std::move(cond), next_assert_id_++, span);
    }
    if (t.kind == Tok::kIdent && (IsIdent("int") || IsIdent("struct") ||
                                  IsIdent("unsigned"))) {
      Fail(DiagnosticKind::kUnsupported, span,
           "declarations must precede statements");
    }
    if (t.kind == Tok::kIdent && IsPunct("(", 1) &&
        t.text != options_.nd.unbounded && t.text != options_.nd.ranged) {
      Fail(DiagnosticKind::kUnsupported, span,
           absl::StrCat("call to '", t.text, "' is not supported"));
    }
    return ParseSimpleStatement(/*require_semicolon=*/true);
  }

  // Assignment forms: `L = E`, `L += E`, `L -= E`, `L++`, `L--`, `++L`,
  // `--L`, and the conditional assignment `(c) ? L = E : E`.
  StmtPtr ParseSimpleStatement(bool require_semicolon) {
    SourceSpan span = Peek().span;
    StmtPtr result;
    if (IsPunct("++") || IsPunct("--")) {
      bool inc = Next().text == "++";
      ExprPtr target = ParseScalarLvalue();
      result = MakeAssign(target, Increment(target, inc), span);
    } else if (Peek().kind == Tok::kIdent && !IsCallAhead()) {
      size_t saved = pos_;
      ExprPtr target = ParseLvalueSyntax();
      if (IsPunct("=") || IsPunct("+=") || IsPunct("-=") || IsPunct("++") ||
          IsPunct("--")) {
        CheckScalarLvalue(*target);
        std::string op = Next().text;
        if (op == "++" || op == "--") {
          result = MakeAssign(target, Increment(target, op == "++"), span);
        } else {
          ExprPtr value = ParseScalarExpr();
          if (op == "+=") {
            value = MakeBinary(BinaryOp::kAdd, target, value, span);
          } else if (op == "-=") {
            value = MakeBinary(BinaryOp::kSub, target, value, span);
          }
          result = MakeAssign(target, value, span);
        }
      } else {
        pos_ = saved;
      }
    }
    if (result == nullptr) result = ParseCondAssign(span);
    if (require_semicolon) Expect(";");
    return result;
  }

  bool IsCallAhead() const {
    return (Peek().text == options_.nd.unbounded ||
            Peek().text == options_.nd.ranged) &&
           IsPunct("(", 1);
  }

  static ExprPtr Increment(const ExprPtr& target, bool inc) {
    return MakeBinary(inc ? BinaryOp::kAdd : BinaryOp::kSub, target,
                      MakeConst(1), target->span);
  }

  StmtPtr ParseCondAssign(SourceSpan span) {
    ExprPtr cond = ParseLogicalOr();
    if (!IsPunct("?")) {
      Unexpected({"'='", "'?'"});
    }
    CheckScalar(*cond);
    Next();
    ExprPtr target = ParseScalarLvalue();
    Expect("=");
    ExprPtr value = ParseConditional();
    CheckScalar(*value);
    Expect(":");
    ExprPtr otherwise = ParseConditional();
    CheckScalar(*otherwise);
    return MakeCondAssign(cond, target, value, otherwise, span);
  }

  StmtPtr ParseFor() {
    SourceSpan span = Next().span;  // for
    Expect("(");
    SourceSpan it_span = Peek().span;
    if (Peek().kind != Tok::kIdent || !IsPunct("=", 1)) {
      Fail(DiagnosticKind::kUnsupported, it_span,
           "for-loop initializer must have the form 'i = E'");
    }
    std::string iterator = ExpectName("loop iterator");
    const VarDecl* decl = program_.FindDecl(iterator);
    if (decl == nullptr) {
      Fail(DiagnosticKind::kType, it_span,
           absl::StrCat("undeclared identifier '", iterator, "'"));
    }
    if (decl->is_array() || decl->is_record()) {
      Fail(DiagnosticKind::kType, it_span,
           absl::StrCat("loop iterator '", iterator, "' must be a scalar"));
    }
    Expect("=");
    ExprPtr init = ParseScalarExpr();
    Expect(";");
    ExprPtr test = ParseScalarExpr();
    Expect(";");
    ExprPtr step = ParseStep(iterator);
    Expect(")");
    StmtPtr body = ParseBody();
    return MakeFor(iterator, std::move(init), std::move(test), std::move(step),
                   std::move(body), span);
  }

  ExprPtr ParseStep(const std::string& iterator) {
    SourceSpan span = Peek().span;
    auto unsupported = [&]() {
      Fail(DiagnosticKind::kUnsupported, span,
           absl::StrCat("for-loop step must update the iterator '", iterator,
                        "'"));
    };
    if (IsPunct("++") || IsPunct("--")) {
      bool inc = Next().text == "++";
      if (!IsIdent(iterator)) unsupported();
      Next();
      return Increment(MakeVar(iterator, span), inc);
    }
    if (!IsIdent(iterator)) unsupported();
    Next();
    ExprPtr var = MakeVar(iterator, span);
    if (Accept("++")) return Increment(var, true);
    if (Accept("--")) return Increment(var, false);
    if (Accept("+=")) return MakeBinary(BinaryOp::kAdd, var, ParseScalarExpr(), span);
    if (Accept("-=")) return MakeBinary(BinaryOp::kSub, var, ParseScalarExpr(), span);
    if (Accept("=")) return ParseScalarExpr();
    unsupported();
    return nullptr;
  }

  // ---- expressions -------------------------------------------------------

  Shape ShapeOf(const Expr& e) const {
    if (const auto* var = std::get_if<VarRef>(&e.node)) {
      const VarDecl* d = program_.FindDecl(var->name);
      if (d->is_array()) return Shape::kArray;
      if (d->is_record()) return Shape::kRecord;
      return Shape::kScalar;
    }
    if (const auto* idx = std::get_if<Index>(&e.node)) {
      return program_.FindDecl(idx->array)->is_record() ? Shape::kRecord
                                                         : Shape::kScalar;
    }
    return Shape::kScalar;
  }

  void CheckScalar(const Expr& e) {
    switch (ShapeOf(e)) {
      case Shape::kScalar:
        return;
      case Shape::kRecord:
        Fail(DiagnosticKind::kType, e.span,
             "record value used where a scalar is required");
      case Shape::kArray:
        Fail(DiagnosticKind::kType, e.span,
             "array used without a subscript");
    }
  }

  void CheckScalarLvalue(const Expr& e) {
    if (!IsLvalue(e)) {
      Fail(DiagnosticKind::kType, e.span, "expression is not assignable");
    }
    CheckScalar(e);
  }

  ExprPtr ParseScalarExpr() {
    ExprPtr e = ParseConditional();
    CheckScalar(*e);
    return e;
  }

  ExprPtr ParseScalarLvalue() {
    if (Peek().kind != Tok::kIdent) Unexpected({"lvalue"});
    ExprPtr e = ParseLvalueSyntax();
    CheckScalarLvalue(*e);
    return e;
  }

  // NAME ['[' E ']'] {'.' NAME}
  ExprPtr ParseLvalueSyntax() {
    SourceSpan span = Peek().span;
    std::string name = ExpectName("identifier");
    const VarDecl* decl = program_.FindDecl(name);
    if (decl == nullptr) {
      Fail(DiagnosticKind::kType, span,
           absl::StrCat("undeclared identifier '", name, "'"));
    }
    ExprPtr e;
    if (IsPunct("[")) {
      SourceSpan bracket = Next().span;
      if (!decl->is_array()) {
        Fail(DiagnosticKind::kType, bracket,
             absl::StrCat("subscripted value '", name, "' is not an array"));
      }
      ExprPtr index = ParseScalarExpr();
      Expect("]");
      if (IsPunct("[")) {
        Fail(DiagnosticKind::kUnsupported, Peek().span,
             "multi-dimensional arrays are not supported");
      }
      e = MakeIndex(name, std::move(index), span);
    } else {
      e = MakeVar(name, span);
    }
    while (IsPunct(".") || IsPunct("->")) {
      if (IsPunct("->")) {
        Fail(DiagnosticKind::kUnsupported, Peek().span,
             "pointers are not supported");
      }
      SourceSpan dot = Next().span;
      std::string field = ExpectName("field name");
      if (ShapeOf(*e) != Shape::kRecord) {
        Fail(DiagnosticKind::kType, dot,
             "member access on a value that is not a record");
      }
      if (!program_.FieldType(*decl, field)) {
        Fail(DiagnosticKind::kType, dot,
             absl::StrCat("no field '", field, "' in struct '", *decl->record,
                          "'"));
      }
      e = MakeField(std::move(e), field, span);
      if (IsPunct(".")) {
        Fail(DiagnosticKind::kType, Peek().span,
             "member access on a value that is not a record");
      }
    }
    return e;
  }

  ExprPtr ParseConditional() {
    ExprPtr cond = ParseLogicalOr();
    if (!IsPunct("?")) return cond;
    SourceSpan span = Next().span;
    CheckScalar(*cond);
    ExprPtr then = ParseConditional();
    CheckScalar(*then);
    Expect(":");
    ExprPtr otherwise = ParseConditional();
    CheckScalar(*otherwise);
    return MakeCond(cond, then, otherwise, cond->span.line ? cond->span : span);
  }

  using SubParser = ExprPtr (Parser::*)();

  ExprPtr ParseBinaryLevel(SubParser next,
                           std::initializer_list<std::pair<const char*, BinaryOp>> ops) {
    ExprPtr lhs = (this->*next)();
    while (true) {
      bool matched = false;
      for (const auto& [spelling, op] : ops) {
        if (IsPunct(spelling)) {
          Next();
          CheckScalar(*lhs);
          ExprPtr rhs = (this->*next)();
          CheckScalar(*rhs);
          SourceSpan span = lhs->span;
          lhs = MakeBinary(op, std::move(lhs), std::move(rhs), span);
          matched = true;
          break;
        }
      }
      if (!matched) return lhs;
    }
  }

  ExprPtr ParseLogicalOr() {
    return ParseBinaryLevel(&Parser::ParseLogicalAnd, {{"||", BinaryOp::kOr}});
  }
  ExprPtr ParseLogicalAnd() {
    return ParseBinaryLevel(&Parser::ParseEquality, {{"&&", BinaryOp::kAnd}});
  }
  ExprPtr ParseEquality() {
    return ParseBinaryLevel(&Parser::ParseRelational,
                            {{"==", BinaryOp::kEq}, {"!=", BinaryOp::kNe}});
  }
  ExprPtr ParseRelational() {
    return ParseBinaryLevel(&Parser::ParseAdditive,
                            {{"<=", BinaryOp::kLe},
                             {">=", BinaryOp::kGe},
                             {"<", BinaryOp::kLt},
                             {">", BinaryOp::kGt}});
  }
  ExprPtr ParseAdditive() {
    return ParseBinaryLevel(&Parser::ParseMultiplicative,
                            {{"+", BinaryOp::kAdd}, {"-", BinaryOp::kSub}});
  }
  ExprPtr ParseMultiplicative() {
    return ParseBinaryLevel(&Parser::ParseUnary, {{"*", BinaryOp::kMul},
                                                  {"/", BinaryOp::kDiv},
                                                  {"%", BinaryOp::kMod}});
  }

  ExprPtr ParseUnary() {
    SourceSpan span = Peek().span;
    if (Accept("-")) {
      ExprPtr operand = ParseUnary();
      CheckScalar(*operand);
      return MakeUnary(UnaryOp::kNeg, std::move(operand), span);
    }
    if (Accept("!")) {
      ExprPtr operand = ParseUnary();
      CheckScalar(*operand);
      return MakeUnary(UnaryOp::kNot, std::move(operand), span);
    }
    if (Accept("+")) return ParseUnary();
    if (IsPunct("&") || IsPunct("*")) {
      Fail(DiagnosticKind::kUnsupported, span, "pointers are not supported");
    }
    if (IsPunct("~") || IsPunct("++") || IsPunct("--")) {
      Fail(DiagnosticKind::kUnsupported, span,
           absl::StrCat("operator '", Peek().text, "' is not supported"));
    }
    return ParsePrimary();
  }

  std::int64_t ParseSignedLiteral() {
    bool negative = Accept("-");
    const Token& t = Peek();
    if (t.kind != Tok::kNumber) Unexpected({"integer literal"});
    Next();
    if (t.value > (std::uint64_t{1} << 63) ||
        (!negative && t.value == (std::uint64_t{1} << 63))) {
      Fail(DiagnosticKind::kType, t.span, "nd bound out of range");
    }
    return negative ? static_cast<std::int64_t>(0 - t.value)
                    : static_cast<std::int64_t>(t.value);
  }

  ExprPtr ParsePrimary() {
    const Token& t = Peek();
    SourceSpan span = t.span;
    if (t.kind == Tok::kNumber) {
      Next();
      bool is_unsigned = t.unsigned_suffix || t.value > 0x7fffffffULL;
      return MakeConst(t.value, is_unsigned, span);
    }
    if (Accept("(")) {
      ExprPtr e = ParseConditional();
      Expect(")");
      return e;
    }
    if (t.kind == Tok::kIdent && IsCallAhead()) {
      std::string callee = Next().text;
      Expect("(");
      if (Accept(")")) {
        if (callee != options_.nd.unbounded) Unexpected({"nd bounds"});
        return MakeNd({}, span);
      }
      if (callee != options_.nd.ranged) Unexpected({"')'"});
      std::int64_t lo = ParseSignedLiteral();
      Expect(",");
      std::int64_t hi = ParseSignedLiteral();
      Expect(")");
      return MakeNdRange(lo, hi, span);
    }
    if (t.kind == Tok::kIdent && !IsReserved(t.text)) {
      if (IsPunct("(", 1)) {
        Fail(DiagnosticKind::kUnsupported, span,
             absl::StrCat("call to '", t.text, "' is not supported"));
      }
      return ParseLvalueSyntax();
    }
    if (t.kind == Tok::kIdent && IsUnsupportedKeyword(t.text)) {
      Fail(DiagnosticKind::kUnsupported, span,
           absl::StrCat("'", t.text, "' is not supported"));
    }
    Unexpected({"expression"});
  }

  std::vector<Token> tokens_;
  const ParseOptions& options_;
  size_t pos_ = 0;
  Program program_;
  int next_assert_id_ = 0;
  std::vector<Diagnostic> diagnostics_;
};

}  // namespace

ParseResult Parse(std::string_view source, const ParseOptions& options) {
  std::vector<Token> tokens;
  LexError lex_error;
  if (!Lex(source, &tokens, &lex_error)) {
    ParseResult result;
    result.diagnostics.push_back(
        Diagnostic{DiagnosticKind::kSyntax, lex_error.span, lex_error.message, {}});
    return result;
  }
  return Parser(std::move(tokens), options).Run();
}

absl::StatusOr<Program> ParseProgram(std::string_view source,
                                     const ParseOptions& options) {
  ParseResult result = Parse(source, options);
  if (result.ok()) return std::move(*result.program);
  std::vector<std::string> lines;
  bool unsupported = false;
  for (const Diagnostic& d : result.diagnostics) {
    lines.push_back(d.ToString());
    unsupported |= d.kind == DiagnosticKind::kUnsupported;
  }
  std::string message = absl::StrJoin(lines, "\n");
  return unsupported ? absl::UnimplementedError(message)
                     : absl::InvalidArgumentError(message);
}

}  // namespace arrayfree
