#include "hof/parser.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <sstream>

namespace hof {

namespace {

enum class Tok {
  Nat,
  Ident,
  Backslash,
  Colon,
  Dot,
  LParen,
  RParen,
  Comma,
  LBrack,
  RBrack,
  Arrow,
  Semi,
  Equals,
  KwSucc,
  KwAdd,
  KwId,
  KwPr,
  KwIter,
  KwComp,
  KwFst,
  KwSnd,
  KwDef,
  KwMain,
  KwN,
  End,
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Nat: return "numeral";
    case Tok::Ident: return "identifier";
    case Tok::Backslash: return "'\\'";
    case Tok::Colon: return "':'";
    case Tok::Dot: return "'.'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::Arrow: return "'->'";
    case Tok::Semi: return "';'";
    case Tok::Equals: return "'='";
    case Tok::KwSucc: return "'succ'";
    case Tok::KwAdd: return "'add'";
    case Tok::KwId: return "'id'";
    case Tok::KwPr: return "'pr'";
    case Tok::KwIter: return "'iter'";
    case Tok::KwComp: return "'comp'";
    case Tok::KwFst: return "'fst'";
    case Tok::KwSnd: return "'snd'";
    case Tok::KwDef: return "'def'";
    case Tok::KwMain: return "'main'";
    case Tok::KwN: return "'N'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  std::uint64_t nat = 0;
  int line = 1;
  int col = 1;
};

const std::map<std::string, Tok, std::less<>>& keywords() {
  static const std::map<std::string, Tok, std::less<>> kw = {
      {"succ", Tok::KwSucc}, {"add", Tok::KwAdd},   {"id", Tok::KwId},
      {"pr", Tok::KwPr},     {"iter", Tok::KwIter}, {"comp", Tok::KwComp},
      {"fst", Tok::KwFst},   {"snd", Tok::KwSnd},   {"def", Tok::KwDef},
      {"main", Tok::KwMain}, {"N", Tok::KwN},
  };
  return kw;
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto bump = [&](size_t n) {
    for (size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') bump(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      bump(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.col = col;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      std::uint64_t v = 0;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
        v = v * 10 + static_cast<std::uint64_t>(src[j] - '0');
        ++j;
      }
      tok.kind = Tok::Nat;
      tok.nat = v;
      tok.text = std::string(src.substr(i, j - i));
      bump(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\'')) {
        ++j;
      }
      std::string word(src.substr(i, j - i));
      auto it = keywords().find(word);
      tok.kind = it == keywords().end() ? Tok::Ident : it->second;
      tok.text = std::move(word);
      bump(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      tok.kind = Tok::Arrow;
      tok.text = "->";
      bump(2);
      out.push_back(std::move(tok));
      continue;
    }
    Tok kind;
    switch (c) {
      case '\\': kind = Tok::Backslash; break;
      case ':': kind = Tok::Colon; break;
      case '.': kind = Tok::Dot; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case ',': kind = Tok::Comma; break;
      case '[': kind = Tok::LBrack; break;
      case ']': kind = Tok::RBrack; break;
      case ';': kind = Tok::Semi; break;
      case '=': kind = Tok::Equals; break;
      default:
        throw ParseError("unexpected character '" + std::string(1, c) + "'", line, col, {});
    }
    tok.kind = kind;
    tok.text = std::string(1, c);
    bump(1);
    out.push_back(std::move(tok));
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.col = col;
  out.push_back(std::move(end));
  return out;
}

TermPtr with_loc(const TermPtr& t, SrcLoc loc) {
  Term copy = *t;
  copy.loc = loc;
  return std::make_shared<const Term>(std::move(copy));
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Ty type_all() {
    Ty t = type();
    expect(Tok::End);
    return t;
  }

  TermPtr term_all() {
    TermPtr t = term();
    expect(Tok::End);
    return t;
  }

  Program program() {
    Program p;
    while (at(Tok::KwDef)) {
      Token kw = next();
      Def d;
      d.loc = {kw.line, kw.col};
      d.name = expect(Tok::Ident).text;
      for (const Def& prev : p.defs) {
        if (prev.name == d.name) {
          throw ParseError("duplicate definition of '" + d.name + "'", kw.line, kw.col, {});
        }
      }
      expect(Tok::Colon);
      d.annot = type();
      expect(Tok::Equals);
      d.body = term();
      p.defs.push_back(std::move(d));
    }
    expect(Tok::KwMain);
    expect(Tok::Equals);
    p.main_term = term();
    expect(Tok::End);
    return p;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  Token next() { return toks_[pos_++]; }

  Token expect(Tok k) {
    if (!at(k)) fail({k});
    return next();
  }

  [[noreturn]] void fail(std::vector<Tok> expected) {
    const Token& t = peek();
    std::vector<std::string> names;
    std::ostringstream msg;
    msg << "syntax error at " << t.line << ":" << t.col << ": expected ";
    for (size_t i = 0; i < expected.size(); ++i) {
      if (i) msg << (i + 1 == expected.size() ? " or " : ", ");
      msg << tok_name(expected[i]);
      names.emplace_back(tok_name(expected[i]));
    }
    msg << ", found " << tok_name(t.kind);
    if (t.kind == Tok::Ident || t.kind == Tok::Nat) msg << " '" << t.text << "'";
    throw ParseError(msg.str(), t.line, t.col, std::move(names));
  }

  // type := type_atom ('->' type)?     (right-associative)
  Ty type() {
    Ty lhs = type_atom();
    if (at(Tok::Arrow)) {
      next();
      return Ty::arrow(lhs, type());
    }
    return lhs;
  }

  // type_atom := 'N' | '(' type (';' type)? ')'
  Ty type_atom() {
    if (at(Tok::KwN)) {
      next();
      return Ty::nat();
    }
    if (at(Tok::LParen)) {
      next();
      Ty first = type();
      if (at(Tok::Semi)) {
        next();
        Ty second = type();
        expect(Tok::RParen);
        return Ty::prod(first, second);
      }
      expect(Tok::RParen);
      return first;
    }
    fail({Tok::KwN, Tok::LParen});
  }

  static bool starts_atom(Tok k) {
    switch (k) {
      case Tok::Nat:
      case Tok::Ident:
      case Tok::KwSucc:
      case Tok::KwAdd:
      case Tok::KwId:
      case Tok::KwPr:
      case Tok::KwIter:
      case Tok::KwComp:
      case Tok::KwFst:
      case Tok::KwSnd:
      case Tok::LParen:
        return true;
      default:
        return false;
    }
  }

  // term := lambda | atom+
  TermPtr term() {
    if (at(Tok::Backslash)) {
      Token bs = next();
      std::string name = expect(Tok::Ident).text;
      expect(Tok::Colon);
      Ty annot = type();
      expect(Tok::Dot);
      TermPtr body = term();
      return with_loc(lam(std::move(name), std::move(annot), std::move(body)),
                      {bs.line, bs.col});
    }
    if (!starts_atom(peek().kind)) {
      fail({Tok::Backslash, Tok::Nat, Tok::Ident, Tok::KwSucc, Tok::KwAdd, Tok::KwId, Tok::KwPr,
            Tok::KwIter, Tok::KwComp, Tok::KwFst, Tok::KwSnd, Tok::LParen});
    }
    SrcLoc start{peek().line, peek().col};
    TermPtr t = atom();
    while (starts_atom(peek().kind)) {
      t = with_loc(app(t, atom()), start);
    }
    return t;
  }

  TermPtr atom() {
    const Token& tok = peek();
    SrcLoc loc{tok.line, tok.col};
    TermPtr result;
    switch (tok.kind) {
      case Tok::Nat: {
        Token n = next();
        if (n.nat < 1) {
          throw ParseError("numerals start at 1", n.line, n.col, {});
        }
        result = lit(n.nat);
        break;
      }
      case Tok::Ident:
        result = var(next().text);
        break;
      case Tok::KwSucc:
        next();
        result = succ();
        break;
      case Tok::KwAdd:
        next();
        result = add();
        break;
      case Tok::KwId: {
        next();
        expect(Tok::LBrack);
        Ty t = type();
        expect(Tok::RBrack);
        result = id_at(std::move(t));
        break;
      }
      case Tok::KwPr: {
        next();
        expect(Tok::LBrack);
        Token k = expect(Tok::Nat);
        expect(Tok::RBrack);
        expect(Tok::LParen);
        TermPtr h = term();
        expect(Tok::Comma);
        TermPtr g = term();
        expect(Tok::RParen);
        result = pr(std::move(h), std::move(g), k.nat);
        break;
      }
      case Tok::KwIter: {
        next();
        expect(Tok::LBrack);
        Ty t = type();
        expect(Tok::RBrack);
        result = iter(std::move(t));
        break;
      }
      case Tok::KwComp: {
        next();
        expect(Tok::LBrack);
        Ty a = type();
        expect(Tok::Comma);
        Ty b = type();
        expect(Tok::Comma);
        Ty c = type();
        expect(Tok::RBrack);
        result = comp(std::move(a), std::move(b), std::move(c));
        break;
      }
      case Tok::KwFst:
        next();
        result = fst(atom());
        break;
      case Tok::KwSnd:
        next();
        result = snd(atom());
        break;
      case Tok::LParen: {
        next();
        TermPtr first = term();
        if (at(Tok::Comma)) {
          next();
          TermPtr second = term();
          expect(Tok::RParen);
          result = pair(std::move(first), std::move(second));
        } else {
          expect(Tok::RParen);
          result = first;
        }
        break;
      }
      default:
        fail({Tok::Nat, Tok::Ident, Tok::KwSucc, Tok::KwAdd, Tok::KwId, Tok::KwPr, Tok::KwIter,
              Tok::KwComp, Tok::KwFst, Tok::KwSnd, Tok::LParen});
    }
    return with_loc(result, loc);
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

}  // namespace

Ty parse_type(std::string_view src) { return Parser(src).type_all(); }

TermPtr parse_term(std::string_view src) { return Parser(src).term_all(); }

Program parse_program(std::string_view src) { return Parser(src).program(); }

}  // namespace hof
