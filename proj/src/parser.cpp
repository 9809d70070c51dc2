#include "parser.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace dlc {

using namespace ast;

namespace {

enum class Tok {
    DeclKw,
    InputKw,
    OutputKw,
    ChoiceDomainKw,
    Ident,
    Number,
    String,
    LParen,
    RParen,
    Comma,
    Dot,
    Colon,
    Turnstile,  // :-
    Semicolon,
    Bang,
    Dollar,
    Plus,
    Minus,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    End,
};

const char* tokenName(Tok t) {
    switch (t) {
        case Tok::DeclKw: return ".decl";
        case Tok::InputKw: return ".input";
        case Tok::OutputKw: return ".output";
        case Tok::ChoiceDomainKw: return "choice-domain";
        case Tok::Ident: return "identifier";
        case Tok::Number: return "number";
        case Tok::String: return "string";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Comma: return "','";
        case Tok::Dot: return "'.'";
        case Tok::Colon: return "':'";
        case Tok::Turnstile: return "':-'";
        case Tok::Semicolon: return "';'";
        case Tok::Bang: return "'!'";
        case Tok::Dollar: return "'$'";
        case Tok::Plus: return "'+'";
        case Tok::Minus: return "'-'";
        case Tok::Eq: return "'='";
        case Tok::Ne: return "'!='";
        case Tok::Lt: return "'<'";
        case Tok::Le: return "'<='";
        case Tok::Gt: return "'>'";
        case Tok::Ge: return "'>='";
        case Tok::End: return "end of input";
    }
    return "?";
}

struct Token {
    Tok kind;
    std::string text;
    std::int64_t number = 0;
    SourcePos pos;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skipTrivia();
            Token t = next();
            out.push_back(t);
            if (t.kind == Tok::End) break;
        }
        return out;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;

    [[noreturn]] void fail(SourcePos at, const std::string& msg) {
        throw SyntaxError(at, msg);
    }

    SourcePos here() const {
        return {line_, col_};
    }

    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    char advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    bool startsWith(std::string_view s) const {
        return src_.substr(pos_, s.size()) == s;
    }

    void skipTrivia() {
        for (;;) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (pos_ < src_.size() && peek() != '\n') advance();
            } else if (c == '/' && peek(1) == '*') {
                SourcePos at = here();
                advance();
                advance();
                while (pos_ < src_.size() && !(peek() == '*' && peek(1) == '/')) advance();
                if (pos_ >= src_.size()) fail(at, "unterminated block comment");
                advance();
                advance();
            } else {
                break;
            }
        }
    }

    static bool identStart(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool identChar(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }

    Token next() {
        SourcePos at = here();
        if (pos_ >= src_.size()) return {Tok::End, "", 0, at};
        char c = peek();

        if (c == '.') {
            for (std::string_view kw : {"decl", "input", "output"}) {
                std::string dotted = "." + std::string(kw);
                if (startsWith(dotted) && !identChar(peek(dotted.size()))) {
                    for (std::size_t i = 0; i < dotted.size(); ++i) advance();
                    Tok t = kw == "decl" ? Tok::DeclKw : kw == "input" ? Tok::InputKw : Tok::OutputKw;
                    return {t, dotted, 0, at};
                }
            }
            advance();
            return {Tok::Dot, ".", 0, at};
        }

        if (startsWith("choice-domain") && !identChar(peek(13))) {
            for (int i = 0; i < 13; ++i) advance();
            return {Tok::ChoiceDomainKw, "choice-domain", 0, at};
        }

        if (identStart(c)) {
            std::string text;
            while (identChar(peek())) text += advance();
            return {Tok::Ident, text, 0, at};
        }

        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string text;
            while (std::isdigit(static_cast<unsigned char>(peek()))) text += advance();
            std::int64_t value = 0;
            auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
            if (ec != std::errc() || p != text.data() + text.size()) fail(at, "number literal out of range");
            return {Tok::Number, text, value, at};
        }

        if (c == '"') {
            advance();
            std::string text;
            for (;;) {
                if (pos_ >= src_.size()) fail(at, "unterminated string literal");
                char d = peek();
                if (d == '\n' || d == '\t') fail(here(), "raw tab or newline in string literal");
                advance();
                if (d == '"') break;
                if (d == '\\' && peek() == '"') {
                    text += '"';
                    advance();
                    continue;
                }
                text += d;
            }
            return {Tok::String, text, 0, at};
        }

        advance();
        switch (c) {
            case '(': return {Tok::LParen, "(", 0, at};
            case ')': return {Tok::RParen, ")", 0, at};
            case ',': return {Tok::Comma, ",", 0, at};
            case ';': return {Tok::Semicolon, ";", 0, at};
            case '$': return {Tok::Dollar, "$", 0, at};
            case '+': return {Tok::Plus, "+", 0, at};
            case '-': return {Tok::Minus, "-", 0, at};
            case '=': return {Tok::Eq, "=", 0, at};
            case ':':
                if (peek() == '-') {
                    advance();
                    return {Tok::Turnstile, ":-", 0, at};
                }
                return {Tok::Colon, ":", 0, at};
            case '!':
                if (peek() == '=') {
                    advance();
                    return {Tok::Ne, "!=", 0, at};
                }
                return {Tok::Bang, "!", 0, at};
            case '<':
                if (peek() == '=') {
                    advance();
                    return {Tok::Le, "<=", 0, at};
                }
                return {Tok::Lt, "<", 0, at};
            case '>':
                if (peek() == '=') {
                    advance();
                    return {Tok::Ge, ">=", 0, at};
                }
                return {Tok::Gt, ">", 0, at};
            default:
                fail(at, std::string("unexpected character '") + c + "'");
        }
    }
};

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    Program run() {
        Program program;
        while (!at(Tok::End)) {
            if (at(Tok::DeclKw)) {
                program.decls.push_back(parseDecl());
            } else if (at(Tok::InputKw) || at(Tok::OutputKw)) {
                program.io.push_back(parseIo());
            } else {
                parseClause(program);
            }
        }
        return program;
    }

private:
    std::vector<Token> toks_;
    std::size_t idx_ = 0;
    int freshCounter_ = 0;

    const Token& cur() const {
        return toks_[idx_];
    }
    const Token& peekAhead(std::size_t k) const {
        std::size_t at = idx_ + k;
        return at < toks_.size() ? toks_[at] : toks_.back();  // the End token
    }
    bool at(Tok t) const {
        return cur().kind == t;
    }
    Token advance() {
        return toks_[idx_++];
    }
    bool accept(Tok t) {
        if (at(t)) {
            ++idx_;
            return true;
        }
        return false;
    }

    [[noreturn]] void failExpected(std::initializer_list<Tok> expected) {
        std::string msg = "expected ";
        bool first = true;
        for (Tok t : expected) {
            if (!first) msg += " or ";
            msg += tokenName(t);
            first = false;
        }
        msg += ", found ";
        msg += tokenName(cur().kind);
        if (cur().kind == Tok::Ident || cur().kind == Tok::Number) msg += " '" + cur().text + "'";
        throw SyntaxError(cur().pos, msg);
    }

    Token expect(Tok t) {
        if (!at(t)) failExpected({t});
        return advance();
    }

    RelationDecl parseDecl() {
        RelationDecl decl;
        decl.pos = cur().pos;
        expect(Tok::DeclKw);
        decl.name = expect(Tok::Ident).text;
        expect(Tok::LParen);
        if (!at(Tok::RParen)) {
            for (;;) {
                Attribute attr;
                attr.name = expect(Tok::Ident).text;
                if (accept(Tok::Colon)) {
                    Token ty = expect(Tok::Ident);
                    if (ty.text == "symbol") {
                        attr.type = AttrType::Symbol;
                    } else if (ty.text == "number") {
                        attr.type = AttrType::Number;
                    } else {
                        throw SyntaxError(ty.pos, "expected 'symbol' or 'number', found '" + ty.text + "'");
                    }
                }
                decl.attrs.push_back(std::move(attr));
                if (!accept(Tok::Comma)) break;
            }
        }
        expect(Tok::RParen);
        if (accept(Tok::ChoiceDomainKw)) {
            for (;;) {
                parseDomain(decl);
                if (!accept(Tok::Comma)) break;
            }
        }
        accept(Tok::Dot);  // trailing dot after a declaration is optional
        return decl;
    }

    // A bare identifier is a singleton domain; a parenthesized list is a
    // multi-attribute domain. Unknown or duplicate attributes are kept by
    // name for the semantic checker, which reports them with positions.
    void parseDomain(RelationDecl& decl) {
        std::vector<std::string> names;
        if (accept(Tok::LParen)) {
            for (;;) {
                names.push_back(expect(Tok::Ident).text);
                if (!accept(Tok::Comma)) break;
            }
            expect(Tok::RParen);
        } else {
            names.push_back(expect(Tok::Ident).text);
        }
        ChoiceDomain dom;
        for (const auto& n : names) {
            for (std::size_t i = 0; i < decl.attrs.size(); ++i) {
                if (decl.attrs[i].name == n) {
                    dom.positions.push_back(i);
                    break;
                }
            }
        }
        std::sort(dom.positions.begin(), dom.positions.end());
        dom.positions.erase(std::unique(dom.positions.begin(), dom.positions.end()), dom.positions.end());
        decl.choiceDomains.push_back(std::move(dom));
        decl.choiceDomainNames.push_back(std::move(names));
    }

    IoDirective parseIo() {
        IoDirective io;
        io.pos = cur().pos;
        io.kind = at(Tok::InputKw) ? IoKind::Input : IoKind::Output;
        advance();
        io.relation = expect(Tok::Ident).text;
        if (accept(Tok::LParen)) expect(Tok::RParen);
        accept(Tok::Dot);
        return io;
    }

    void parseClause(Program& program) {
        Atom head = parseAtom();
        if (accept(Tok::Dot)) {
            SourcePos pos = head.pos;
            program.facts.push_back(Fact{std::move(head), pos});
            return;
        }
        expect(Tok::Turnstile);
        Rule rule;
        rule.pos = head.pos;
        rule.head = std::move(head);
        rule.body = parseDisjunctionBody(rule);
        expect(Tok::Dot);
        program.rules.push_back(std::move(rule));
    }

    // `;` binds looser than `,`; a top-level disjunction becomes a single
    // Disjunction literal wrapping its alternatives.
    std::vector<Literal> parseDisjunctionBody(Rule& rule) {
        std::vector<std::vector<Literal>> alts;
        alts.push_back(parseConjunction(rule));
        while (accept(Tok::Semicolon)) alts.push_back(parseConjunction(rule));
        if (alts.size() == 1) return std::move(alts[0]);
        Literal disj;
        disj.kind = Literal::Kind::Disjunction;
        disj.disjuncts = std::move(alts);
        return {std::move(disj)};
    }

    std::vector<Literal> parseConjunction(Rule& rule) {
        std::vector<Literal> lits;
        for (;;) {
            parseLiteral(rule, lits);
            if (!accept(Tok::Comma)) break;
        }
        return lits;
    }

    void parseLiteral(Rule& rule, std::vector<Literal>& out) {
        SourcePos startPos = cur().pos;
        if (accept(Tok::Bang)) {
            Literal l = Literal::negated(parseAtom());
            l.pos = startPos;
            out.push_back(std::move(l));
            return;
        }
        if (at(Tok::LParen)) {
            advance();
            std::vector<std::vector<Literal>> alts;
            alts.push_back(parseConjunction(rule));
            while (accept(Tok::Semicolon)) alts.push_back(parseConjunction(rule));
            expect(Tok::RParen);
            if (alts.size() == 1) {
                for (auto& l : alts[0]) out.push_back(std::move(l));
            } else {
                Literal disj;
                disj.kind = Literal::Kind::Disjunction;
                disj.disjuncts = std::move(alts);
                disj.pos = startPos;
                out.push_back(std::move(disj));
            }
            return;
        }
        if (at(Tok::Ident) && cur().text == "choice" && peekAhead(1).kind == Tok::LParen &&
            peekAhead(2).kind == Tok::LParen) {
            advance();
            expect(Tok::LParen);
            Literal goal;
            goal.kind = Literal::Kind::ChoiceGoal;
            goal.pos = startPos;
            expect(Tok::LParen);
            for (;;) {
                goal.domainVars.push_back(expect(Tok::Ident).text);
                if (!accept(Tok::Comma)) break;
            }
            expect(Tok::RParen);
            expect(Tok::Comma);
            expect(Tok::LParen);
            for (;;) {
                goal.dependentVars.push_back(expect(Tok::Ident).text);
                if (!accept(Tok::Comma)) break;
            }
            expect(Tok::RParen);
            expect(Tok::RParen);
            out.push_back(std::move(goal));
            return;
        }
        // Positive atom or comparison. An identifier followed by '(' is an
        // atom; anything else starts a comparison operand.
        if (at(Tok::Ident) && peekAhead(1).kind == Tok::LParen && !isAggregateHead()) {
            Literal l = Literal::positive(parseAtom());
            l.pos = startPos;
            out.push_back(std::move(l));
            return;
        }
        parseComparison(rule, out, startPos);
    }

    bool isAggregateHead() const {
        const std::string& t = cur().text;
        return t == "count" || t == "max" || t == "min";
    }

    // One comparison; either side may be an aggregate. `v = count : a(_)`
    // binds directly, otherwise the aggregate gets a fresh variable and the
    // comparison is kept against that variable.
    void parseComparison(Rule& rule, std::vector<Literal>& out, SourcePos startPos) {
        auto lhs = parseOperand();
        Tok opTok = cur().kind;
        CmpOp op;
        switch (opTok) {
            case Tok::Eq: op = CmpOp::Eq; break;
            case Tok::Ne: op = CmpOp::Ne; break;
            case Tok::Lt: op = CmpOp::Lt; break;
            case Tok::Le: op = CmpOp::Le; break;
            case Tok::Gt: op = CmpOp::Gt; break;
            case Tok::Ge: op = CmpOp::Ge; break;
            default:
                failExpected({Tok::Eq, Tok::Ne, Tok::Lt, Tok::Le, Tok::Gt, Tok::Ge});
        }
        advance();
        auto rhs = parseOperand();

        // Direct binding form: var = aggregate (or aggregate = var).
        if (op == CmpOp::Eq) {
            if (!lhs.second && rhs.second && lhs.first.isVariable()) {
                rhs.second->aggBindVar = lhs.first.text;
                out.push_back(std::move(*rhs.second));
                return;
            }
            if (!rhs.second && lhs.second && rhs.first.isVariable()) {
                lhs.second->aggBindVar = rhs.first.text;
                out.push_back(std::move(*lhs.second));
                return;
            }
        }

        Term lhsTerm = materialize(rule, std::move(lhs), out);
        Term rhsTerm = materialize(rule, std::move(rhs), out);
        Literal cmp = Literal::comparison(op, std::move(lhsTerm), std::move(rhsTerm));
        cmp.pos = startPos;
        out.push_back(std::move(cmp));
    }

    // An operand is either a term or an aggregate expression.
    using Operand = std::pair<Term, std::optional<Literal>>;

    Operand parseOperand() {
        if (at(Tok::Ident) && isAggregateHead()) {
            Tok after = peekAhead(1).kind;
            if (after == Tok::Colon || (after == Tok::Ident && peekAhead(2).kind == Tok::Colon)) {
                Literal agg;
                agg.kind = Literal::Kind::Aggregate;
                agg.pos = cur().pos;
                std::string kw = advance().text;
                agg.aggKind = kw == "count" ? AggregateKind::Count
                                            : kw == "max" ? AggregateKind::Max : AggregateKind::Min;
                if (agg.aggKind != AggregateKind::Count) agg.aggMeasureVar = expect(Tok::Ident).text;
                expect(Tok::Colon);
                agg.atom = parseAtom();
                return {Term{}, std::move(agg)};
            }
        }
        return {parseTerm(), std::nullopt};
    }

    Term materialize(Rule& rule, Operand operand, std::vector<Literal>& out) {
        if (!operand.second) return std::move(operand.first);
        std::string fresh = freshVar(rule);
        operand.second->aggBindVar = fresh;
        out.push_back(std::move(*operand.second));
        return Term::variable(fresh);
    }

    std::string freshVar(const Rule&) {
        return "_agg" + std::to_string(freshCounter_++);
    }

    Atom parseAtom() {
        Atom atom;
        atom.pos = cur().pos;
        atom.relation = expect(Tok::Ident).text;
        expect(Tok::LParen);
        if (!at(Tok::RParen)) {
            for (;;) {
                atom.args.push_back(parseTerm());
                if (!accept(Tok::Comma)) break;
            }
        }
        expect(Tok::RParen);
        return atom;
    }

    Term parseTerm() {
        Term lhs = parsePrimary();
        while (at(Tok::Plus) || at(Tok::Minus)) {
            char op = at(Tok::Plus) ? '+' : '-';
            advance();
            Term rhs = parsePrimary();
            lhs = Term::binary(op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Term parsePrimary() {
        SourcePos startPos = cur().pos;
        if (accept(Tok::Minus)) {
            Token n = expect(Tok::Number);
            Term t = Term::num(-n.number);
            t.pos = startPos;
            return t;
        }
        if (at(Tok::Number)) {
            Term t = Term::num(advance().number);
            t.pos = startPos;
            return t;
        }
        if (at(Tok::String)) {
            Term t = Term::symbol(advance().text);
            t.pos = startPos;
            return t;
        }
        if (at(Tok::Dollar)) {
            advance();
            Term t = Term::counter();
            t.pos = startPos;
            return t;
        }
        if (at(Tok::Ident)) {
            std::string name = advance().text;
            Term t = name == "_" ? Term::wildcard() : Term::variable(std::move(name));
            t.pos = startPos;
            return t;
        }
        failExpected({Tok::Number, Tok::String, Tok::Dollar, Tok::Ident, Tok::Minus});
    }

};

}  // namespace

ast::Program parse(std::string_view source) {
    Lexer lexer(source);
    Parser parser(lexer.run());
    return parser.run();
}

}  // namespace dlc
