#include "qam/qasm.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace qam {

namespace {

constexpr double kPi = 3.14159265358979323846;

enum class TokKind {
    Identifier,
    Integer,
    Real,
    Semicolon,
    Comma,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Arrow,
    Plus,
    Minus,
    Star,
    Slash,
    String,
    End,
};

struct Token {
    TokKind kind = TokKind::End;
    std::string text;
    SourceSpan span;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        skip_ws_and_comments();
        Token tok;
        tok.span = {line_, col_};
        if (pos_ >= text_.size()) {
            tok.kind = TokKind::End;
            return tok;
        }
        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                    text_[pos_] == '.')) {
                tok.text += text_[pos_];
                advance();
            }
            tok.kind = TokKind::Identifier;
            return tok;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
            bool is_real = false;
            while (pos_ < text_.size()) {
                char d = text_[pos_];
                if (std::isdigit(static_cast<unsigned char>(d))) {
                    tok.text += d;
                    advance();
                } else if (d == '.' || d == 'e' || d == 'E') {
                    is_real = true;
                    tok.text += d;
                    advance();
                    if ((d == 'e' || d == 'E') && pos_ < text_.size() &&
                        (text_[pos_] == '+' || text_[pos_] == '-')) {
                        tok.text += text_[pos_];
                        advance();
                    }
                } else {
                    break;
                }
            }
            tok.kind = is_real ? TokKind::Real : TokKind::Integer;
            return tok;
        }
        if (c == '"') {
            advance();
            while (pos_ < text_.size() && text_[pos_] != '"') {
                tok.text += text_[pos_];
                advance();
            }
            if (pos_ >= text_.size()) throw SyntaxError("unterminated string", tok.span);
            advance();
            tok.kind = TokKind::String;
            return tok;
        }
        if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
            advance();
            advance();
            tok.kind = TokKind::Arrow;
            return tok;
        }
        advance();
        switch (c) {
            case ';': tok.kind = TokKind::Semicolon; return tok;
            case ',': tok.kind = TokKind::Comma; return tok;
            case '[': tok.kind = TokKind::LBracket; return tok;
            case ']': tok.kind = TokKind::RBracket; return tok;
            case '(': tok.kind = TokKind::LParen; return tok;
            case ')': tok.kind = TokKind::RParen; return tok;
            case '+': tok.kind = TokKind::Plus; return tok;
            case '-': tok.kind = TokKind::Minus; return tok;
            case '*': tok.kind = TokKind::Star; return tok;
            case '/': tok.kind = TokKind::Slash; return tok;
            default:
                throw SyntaxError(std::string("unexpected character '") + c + "'", tok.span);
        }
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_ws_and_comments() {
        for (;;) {
            while (pos_ < text_.size() &&
                   std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                advance();
            }
            if (pos_ + 1 < text_.size() && text_[pos_] == '/' && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
                continue;
            }
            return;
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(const std::string& text) : lexer_(text) { advance(); }

    Circuit parse() {
        expect_identifier("OPENQASM");
        Token version = expect(TokKind::Real, "version number");
        if (version.text != "2.0") {
            throw UnsupportedConstruct("OPENQASM version " + version.text +
                                           " (only 2.0 is supported)",
                                       version.span);
        }
        expect(TokKind::Semicolon, "';'");

        while (cur_.kind != TokKind::End) statement();

        validate(circuit_);
        return circuit_;
    }

private:
    void statement() {
        Token head = expect(TokKind::Identifier, "statement");
        const std::string& word = head.text;
        if (word == "include") {
            Token path = expect(TokKind::String, "include path");
            if (path.text != "qelib1.inc") {
                throw UnsupportedConstruct("include \"" + path.text + "\"", path.span);
            }
            expect(TokKind::Semicolon, "';'");
            return;
        }
        if (word == "qreg" || word == "creg") {
            declare_register(word == "qreg", head.span);
            return;
        }
        if (word == "measure") {
            parse_measure(head.span);
            return;
        }
        if (word == "reset") {
            auto qubits = parse_qubit_operand();
            for (std::uint32_t q : qubits) {
                GateOp g = gate::reset(q);
                g.span = head.span;
                circuit_.gates.push_back(g);
            }
            expect(TokKind::Semicolon, "';'");
            return;
        }
        if (word == "barrier") {
            parse_barrier(head.span);
            return;
        }
        if (word == "gate" || word == "opaque" || word == "if" || word == "u1" ||
            word == "u2" || word == "u3" || word == "U" || word == "CX") {
            throw UnsupportedConstruct("construct '" + word + "'", head.span);
        }
        parse_gate(word, head.span);
    }

    void declare_register(bool quantum, SourceSpan span) {
        Token name = expect(TokKind::Identifier, "register name");
        expect(TokKind::LBracket, "'['");
        Token size_tok = expect(TokKind::Integer, "register size");
        expect(TokKind::RBracket, "']'");
        expect(TokKind::Semicolon, "';'");
        std::uint32_t size = parse_u32(size_tok);
        if (size == 0) throw SyntaxError("register size must be positive", size_tok.span);
        auto& regs = quantum ? circuit_.qregs : circuit_.cregs;
        for (const RegisterInfo& r : regs) {
            if (r.name == name.text) {
                throw SyntaxError("register '" + name.text + "' already declared", name.span);
            }
        }
        std::uint32_t& total = quantum ? circuit_.n_qubits : circuit_.n_clbits;
        regs.push_back({name.text, size, total});
        total += size;
        if (quantum && circuit_.n_qubits > 24) {
            throw CapacityExceeded("circuit declares " + std::to_string(circuit_.n_qubits) +
                                   " qubits; the simulator caps at 24");
        }
        (void)span;
    }

    // A qubit operand is either reg[i] (one index) or a bare register name,
    // which expands to all of its qubits.
    std::vector<std::uint32_t> parse_qubit_operand() { return parse_operand(true); }
    std::vector<std::uint32_t> parse_clbit_operand() { return parse_operand(false); }

    std::vector<std::uint32_t> parse_operand(bool quantum) {
        Token name = expect(TokKind::Identifier, "register name");
        const auto& regs = quantum ? circuit_.qregs : circuit_.cregs;
        const RegisterInfo* reg = nullptr;
        for (const RegisterInfo& r : regs) {
            if (r.name == name.text) {
                reg = &r;
                break;
            }
        }
        if (reg == nullptr) {
            throw SyntaxError("unknown register '" + name.text + "'", name.span);
        }
        if (cur_.kind == TokKind::LBracket) {
            advance();
            Token idx = expect(TokKind::Integer, "index");
            expect(TokKind::RBracket, "']'");
            std::uint32_t i = parse_u32(idx);
            if (i >= reg->size) {
                throw IndexOutOfRange("index " + std::to_string(i) + " out of range for " +
                                          name.text + "[" + std::to_string(reg->size) + "]",
                                      idx.span);
            }
            return {reg->offset + i};
        }
        std::vector<std::uint32_t> all(reg->size);
        for (std::uint32_t i = 0; i < reg->size; ++i) all[i] = reg->offset + i;
        return all;
    }

    void parse_measure(SourceSpan span) {
        auto qubits = parse_qubit_operand();
        expect(TokKind::Arrow, "'->'");
        auto clbits = parse_clbit_operand();
        expect(TokKind::Semicolon, "';'");
        if (qubits.size() != clbits.size()) {
            throw SyntaxError("measure operand sizes differ", span);
        }
        for (std::size_t i = 0; i < qubits.size(); ++i) {
            GateOp g = gate::measure(qubits[i], clbits[i]);
            g.span = span;
            circuit_.gates.push_back(g);
        }
    }

    void parse_barrier(SourceSpan span) {
        std::vector<std::uint32_t> qubits;
        if (cur_.kind == TokKind::Semicolon) {
            for (std::uint32_t q = 0; q < circuit_.n_qubits; ++q) qubits.push_back(q);
        } else {
            for (;;) {
                auto more = parse_qubit_operand();
                qubits.insert(qubits.end(), more.begin(), more.end());
                if (cur_.kind != TokKind::Comma) break;
                advance();
            }
        }
        expect(TokKind::Semicolon, "';'");
        if (qubits.empty()) throw SyntaxError("barrier on empty circuit", span);
        GateOp g = gate::barrier(std::move(qubits));
        g.span = span;
        circuit_.gates.push_back(g);
    }

    void parse_gate(const std::string& word, SourceSpan span) {
        GateKind kind = gate_kind_from_name(word, span);
        const GateTraits& tr = traits(kind);
        std::vector<double> params;
        if (cur_.kind == TokKind::LParen) {
            advance();
            for (;;) {
                params.push_back(parse_expr());
                if (cur_.kind != TokKind::Comma) break;
                advance();
            }
            expect(TokKind::RParen, "')'");
        }
        if (params.size() != tr.param_arity) {
            throw SyntaxError(word + " expects " + std::to_string(tr.param_arity) +
                                  " parameter(s)",
                              span);
        }
        std::vector<std::vector<std::uint32_t>> operands;
        for (;;) {
            operands.push_back(parse_qubit_operand());
            if (cur_.kind != TokKind::Comma) break;
            advance();
        }
        expect(TokKind::Semicolon, "';'");
        if (operands.size() != tr.qubit_arity) {
            throw SyntaxError(word + " expects " + std::to_string(tr.qubit_arity) +
                                  " qubit operand(s)",
                              span);
        }
        if (tr.qubit_arity == 1) {
            for (std::uint32_t q : operands[0]) {
                GateOp g{kind, {q}, {}, params, span};
                circuit_.gates.push_back(g);
            }
            return;
        }
        // Multi-qubit gates take single-qubit operands only; register
        // broadcast across them is not part of the subset.
        std::vector<std::uint32_t> qubits;
        for (const auto& op : operands) {
            if (op.size() != 1) {
                throw UnsupportedConstruct("register broadcast on multi-qubit gate '" + word + "'",
                                           span);
            }
            qubits.push_back(op[0]);
        }
        GateOp g{kind, qubits, {}, params, span};
        validate_gate(g, circuit_.n_qubits, circuit_.n_clbits);
        circuit_.gates.push_back(g);
    }

    // expr := term (('+'|'-') term)* ; term := factor (('*'|'/') factor)* ;
    // factor := ['-'|'+'] (number | pi | '(' expr ')')
    double parse_expr() {
        double value = parse_term();
        while (cur_.kind == TokKind::Plus || cur_.kind == TokKind::Minus) {
            bool add = cur_.kind == TokKind::Plus;
            advance();
            double rhs = parse_term();
            value = add ? value + rhs : value - rhs;
        }
        return value;
    }

    double parse_term() {
        double value = parse_factor();
        while (cur_.kind == TokKind::Star || cur_.kind == TokKind::Slash) {
            bool mul = cur_.kind == TokKind::Star;
            advance();
            double rhs = parse_factor();
            value = mul ? value * rhs : value / rhs;
        }
        return value;
    }

    double parse_factor() {
        if (cur_.kind == TokKind::Minus) {
            advance();
            return -parse_factor();
        }
        if (cur_.kind == TokKind::Plus) {
            advance();
            return parse_factor();
        }
        if (cur_.kind == TokKind::LParen) {
            advance();
            double v = parse_expr();
            expect(TokKind::RParen, "')'");
            return v;
        }
        if (cur_.kind == TokKind::Identifier && cur_.text == "pi") {
            advance();
            return kPi;
        }
        if (cur_.kind == TokKind::Integer || cur_.kind == TokKind::Real) {
            double v = 0.0;
            auto res = std::from_chars(cur_.text.data(), cur_.text.data() + cur_.text.size(), v);
            if (res.ec != std::errc()) {
                throw SyntaxError("bad number '" + cur_.text + "'", cur_.span);
            }
            advance();
            return v;
        }
        throw SyntaxError("expected angle expression", cur_.span);
    }

    std::uint32_t parse_u32(const Token& tok) {
        std::uint32_t v = 0;
        auto res = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
        if (res.ec != std::errc()) throw SyntaxError("bad integer '" + tok.text + "'", tok.span);
        return v;
    }

    Token expect(TokKind kind, const std::string& what) {
        if (cur_.kind != kind) {
            throw SyntaxError("expected " + what, cur_.span);
        }
        Token tok = cur_;
        advance();
        return tok;
    }

    void expect_identifier(const std::string& word) {
        if (cur_.kind != TokKind::Identifier || cur_.text != word) {
            throw SyntaxError("expected '" + word + "'", cur_.span);
        }
        advance();
    }

    void advance() { cur_ = lexer_.next(); }

    Lexer lexer_;
    Token cur_;
    Circuit circuit_;
};

void append_operand(std::string& out, const Circuit& c, bool quantum, std::uint32_t flat) {
    const auto& regs = quantum ? c.qregs : c.cregs;
    for (const RegisterInfo& r : regs) {
        if (flat >= r.offset && flat < r.offset + r.size) {
            out += r.name;
            out += '[';
            out += std::to_string(flat - r.offset);
            out += ']';
            return;
        }
    }
    out += quantum ? "q[" : "c[";
    out += std::to_string(flat);
    out += ']';
}

}  // namespace

Circuit parse_qasm(const std::string& text) {
    Parser parser(text);
    return parser.parse();
}

Circuit parse_qasm_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open QASM file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    Circuit c = parse_qasm(buf.str());
    c.name = path;
    return c;
}

std::string emit_qasm(const Circuit& c) {
    Circuit normalized = c;
    if (normalized.qregs.empty() && normalized.n_qubits > 0) {
        normalized.qregs.push_back({"q", normalized.n_qubits, 0});
    }
    if (normalized.cregs.empty() && normalized.n_clbits > 0) {
        normalized.cregs.push_back({"c", normalized.n_clbits, 0});
    }

    std::string out = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
    for (const RegisterInfo& r : normalized.qregs) {
        out += "qreg " + r.name + "[" + std::to_string(r.size) + "];\n";
    }
    for (const RegisterInfo& r : normalized.cregs) {
        out += "creg " + r.name + "[" + std::to_string(r.size) + "];\n";
    }
    char buf[64];
    for (const GateOp& g : normalized.gates) {
        const GateTraits& tr = traits(g.kind);
        out += tr.qasm_name;
        if (!g.params.empty()) {
            out += '(';
            for (std::size_t i = 0; i < g.params.size(); ++i) {
                if (i > 0) out += ',';
                std::snprintf(buf, sizeof(buf), "%.17g", g.params[i]);
                out += buf;
            }
            out += ')';
        }
        out += ' ';
        for (std::size_t i = 0; i < g.qubits.size(); ++i) {
            if (i > 0) out += ',';
            append_operand(out, normalized, true, g.qubits[i]);
        }
        if (g.kind == GateKind::Measure) {
            out += " -> ";
            append_operand(out, normalized, false, g.clbits[0]);
        }
        out += ";\n";
    }
    return out;
}

}  // namespace qam
