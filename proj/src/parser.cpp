#include "goim/parser.hpp"

#include <cctype>
#include <unordered_map>
#include <vector>

namespace goim {

namespace {

struct Token {
  enum class Kind { Lambda, Dot, LParen, RParen, Ident, AppOp, End };
  Kind kind;
  std::string text;     // Ident
  Strategy strat;       // AppOp
  size_t pos;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  size_t i = 0;
  auto isIdentStart = [](char c) { return std::isalpha(static_cast<unsigned char>(c)); };
  auto isIdentChar = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
    switch (c) {
      case '\\': out.push_back({Token::Kind::Lambda, "", {}, i}); ++i; continue;
      case '.': out.push_back({Token::Kind::Dot, "", {}, i}); ++i; continue;
      case '(': out.push_back({Token::Kind::LParen, "", {}, i}); ++i; continue;
      case ')': out.push_back({Token::Kind::RParen, "", {}, i}); ++i; continue;
      case '[':
        throw ParseError("explicit substitutions are not accepted in input terms", i);
      case '@': {
        size_t start = i++;
        std::string word;
        while (i < s.size() && isIdentChar(s[i])) word += s[i++];
        Strategy st;
        if (word == "need") st = Strategy::Need;
        else if (word == "lv") st = Strategy::LeftValue;
        else if (word == "rv") st = Strategy::RightValue;
        else throw ParseError("unknown application annotation '@" + word + "'", start);
        out.push_back({Token::Kind::AppOp, "", st, start});
        continue;
      }
      default: break;
    }
    if (isIdentStart(c)) {
      size_t start = i;
      std::string word;
      while (i < s.size() && isIdentChar(s[i])) word += s[i++];
      out.push_back({Token::Kind::Ident, word, {}, start});
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", i);
  }
  out.push_back({Token::Kind::End, "", {}, s.size()});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, Strategy def) : toks_(std::move(toks)), def_(def) {}

  TermPtr run() {
    TermPtr t = parseTerm();
    expect(Token::Kind::End, "end of input");
    return t;
  }

 private:
  const Token& cur() const { return toks_[i_]; }
  void advance() { ++i_; }
  void expect(Token::Kind k, const char* what) {
    if (cur().kind != k) throw ParseError(std::string("expected ") + what, cur().pos);
    advance();
  }

  bool startsItem() const {
    auto k = cur().kind;
    return k == Token::Kind::Ident || k == Token::Kind::LParen || k == Token::Kind::Lambda;
  }

  // item := atom | \x. term ; a lambda swallows the rest of the chain.
  TermPtr parseItem(bool* wasLambda) {
    if (cur().kind == Token::Kind::Lambda) {
      advance();
      if (cur().kind != Token::Kind::Ident)
        throw ParseError("expected binder after '\\'", cur().pos);
      std::string binder = cur().text;
      advance();
      expect(Token::Kind::Dot, "'.' after binder");
      TermPtr body = parseTerm();
      if (wasLambda) *wasLambda = true;
      return mkAbs(binder, body);
    }
    if (wasLambda) *wasLambda = false;
    if (cur().kind == Token::Kind::Ident) {
      TermPtr t = mkVar(cur().text);
      advance();
      return t;
    }
    if (cur().kind == Token::Kind::LParen) {
      advance();
      TermPtr t = parseTerm();
      expect(Token::Kind::RParen, "')'");
      return t;
    }
    throw ParseError("expected a term", cur().pos);
  }

  TermPtr parseTerm() {
    bool lambda = false;
    TermPtr t = parseItem(&lambda);
    while (!lambda) {
      Strategy st = def_;
      if (cur().kind == Token::Kind::AppOp) {
        st = cur().strat;
        advance();
      } else if (!startsItem()) {
        break;
      }
      TermPtr u = parseItem(&lambda);
      t = mkApp(st, t, u);
    }
    return t;
  }

  std::vector<Token> toks_;
  Strategy def_;
  size_t i_ = 0;
};

void checkSingleStrategy(const TermPtr& t, std::optional<Strategy>& found) {
  if (asVar(t)) return;
  if (auto* a = asAbs(t)) { checkSingleStrategy(a->body, found); return; }
  auto* a = asApp(t);
  if (found && *found != a->strat) {
    throw ParseError(std::string("mixed application strategies: @") + strategyName(*found) +
                         " and @" + strategyName(a->strat),
                     0);
  }
  if (!found) found = a->strat;
  checkSingleStrategy(a->fun, found);
  checkSingleStrategy(a->arg, found);
}

// Rename duplicate binders so all binders are pairwise distinct. Bound
// occurrences follow their binder through env.
TermPtr barendregtRec(const TermPtr& t, NameSupply& names,
                      std::unordered_map<std::string, std::string>& env,
                      std::unordered_set<std::string>& boundSeen) {
  if (auto* v = asVar(t)) {
    auto it = env.find(v->name);
    return it == env.end() ? t : mkVar(it->second);
  }
  if (auto* a = asAbs(t)) {
    std::string nb = a->binder;
    if (!boundSeen.insert(nb).second) {
      nb = names.fresh(a->binder);
      boundSeen.insert(nb);
    } else {
      names.claim(nb);
    }
    auto saved = env.find(a->binder) != env.end() ? std::optional(env[a->binder]) : std::nullopt;
    bool shadow = nb != a->binder;
    if (shadow) env[a->binder] = nb; else env.erase(a->binder);
    TermPtr body = barendregtRec(a->body, names, env, boundSeen);
    if (saved) env[a->binder] = *saved; else env.erase(a->binder);
    return mkAbs(nb, body);
  }
  auto* a = asApp(t);
  TermPtr fun = barendregtRec(a->fun, names, env, boundSeen);
  TermPtr arg = barendregtRec(a->arg, names, env, boundSeen);
  return mkApp(a->strat, fun, arg);
}

}  // namespace

TermPtr parse(const std::string& text, Strategy defaultStrategy) {
  Parser p(lex(text), defaultStrategy);
  TermPtr t = p.run();
  std::optional<Strategy> found;
  checkSingleStrategy(t, found);
  NameSupply names;
  names.claimAll(t);  // free variables must never be captured by renaming
  std::unordered_map<std::string, std::string> env;
  std::unordered_set<std::string> boundSeen;
  return barendregtRec(t, names, env, boundSeen);
}

}  // namespace goim
