#include "csn/parser.hpp"

#include "csn/printer.hpp"

#include <cctype>
#include <charconv>
#include <set>

namespace csn {

ParseError::ParseError(int line, int column, const std::string& message)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message), line_(line), column_(column)
{
}

namespace {

enum class Tok { Ident, Number, String, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    double number = 0.0;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            Token t;
            t.line = line_;
            t.column = col_;
            if (pos_ >= src_.size()) {
                out.push_back(t);
                return out;
            }
            char c = src_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t start = pos_;
                while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                              src_[pos_] == '_' || src_[pos_] == '\''))
                    advance();
                t.kind = Tok::Ident;
                t.text = std::string(src_.substr(start, pos_ - start));
            } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                       (c == '-' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
                t.kind = Tok::Number;
                t.number = number(t);
            } else if (c == '"') {
                t.kind = Tok::String;
                t.text = string(t);
            } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
                t.kind = Tok::Punct;
                t.text = "->";
                advance();
                advance();
            } else if (std::string_view("{}()[],;=.:").find(c) != std::string_view::npos) {
                t.kind = Tok::Punct;
                t.text = std::string(1, c);
                advance();
            } else {
                throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
            }
            out.push_back(std::move(t));
        }
    }

private:
    void advance()
    {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space()
    {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n')
                    advance();
            } else {
                return;
            }
        }
    }

    bool digit_at(std::size_t i) const
    {
        return i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]));
    }

    double number(const Token& t)
    {
        std::size_t start = pos_;
        if (src_[pos_] == '-')
            advance();
        while (digit_at(pos_))
            advance();
        if (pos_ < src_.size() && src_[pos_] == '.' && digit_at(pos_ + 1)) {
            advance();
            while (digit_at(pos_))
                advance();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t k = pos_ + 1;
            if (k < src_.size() && (src_[k] == '+' || src_[k] == '-'))
                ++k;
            if (digit_at(k)) {
                while (pos_ < k)
                    advance();
                while (digit_at(pos_))
                    advance();
            }
        }
        double d = 0;
        auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, d);
        if (ec != std::errc() || ptr != src_.data() + pos_)
            throw ParseError(t.line, t.column, "malformed number");
        return d;
    }

    std::string string(const Token& t)
    {
        advance();
        std::string out;
        for (;;) {
            if (pos_ >= src_.size() || src_[pos_] == '\n')
                throw ParseError(t.line, t.column, "unterminated string literal");
            char c = src_[pos_];
            advance();
            if (c == '"')
                return out;
            if (c == '\\') {
                if (pos_ >= src_.size())
                    throw ParseError(t.line, t.column, "unterminated string literal");
                char e = src_[pos_];
                advance();
                if (e == 'n')
                    out += '\n';
                else if (e == '"' || e == '\\')
                    out += e;
                else
                    throw ParseError(line_, col_ - 1, std::string("unknown escape '\\") + e + "'");
            } else {
                out += c;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(Lexer(text).run()) {}

    SourceUnit unit()
    {
        SourceUnit u;
        bool have_interface = false;
        bool have_world = false;
        std::set<std::string> node_names;
        while (!at_end()) {
            const Token& t = peek();
            if (is_ident("interface")) {
                if (have_interface)
                    fail(t, "duplicate interface block");
                have_interface = true;
                next();
                u.interface = GlobalInterface(method_types('{', '}', false));
            } else if (is_ident("world")) {
                if (have_world)
                    fail(t, "duplicate world block");
                have_world = true;
                next();
                u.world = world();
            } else if (is_ident("sensor")) {
                next();
                NodeDecl node = sensor();
                if (!node_names.insert(node.name).second)
                    fail(t, "duplicate sensor name '" + node.name + "'");
                u.nodes.push_back(std::move(node));
            } else if (t.kind == Tok::Ident) {
                TemplateDef def = template_def();
                if (templates_.contains(def.name))
                    fail(t, "duplicate template '" + def.name + "'");
                templates_.emplace(def.name, def);
                u.templates.push_back(std::move(def));
            } else {
                fail(t, "expected 'interface', 'world', 'sensor' or a template definition");
            }
        }
        if (!have_interface)
            fail(peek(), "missing interface block");
        return u;
    }

    Program standalone_program()
    {
        Program p = program();
        if (!at_end())
            fail(peek(), "unexpected '" + describe(peek()) + "' after program");
        return p;
    }

    Type standalone_type()
    {
        Type t = type();
        if (!at_end())
            fail(peek(), "unexpected '" + describe(peek()) + "' after type");
        return t;
    }

private:
    // -- token helpers ------------------------------------------------------

    const Token& peek(std::size_t ahead = 0) const
    {
        std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
        return toks_[i];
    }

    const Token& next()
    {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size())
            ++pos_;
        return t;
    }

    bool at_end() const { return peek().kind == Tok::End; }

    bool is_punct(std::string_view p, std::size_t ahead = 0) const
    {
        const Token& t = peek(ahead);
        return t.kind == Tok::Punct && t.text == p;
    }

    bool is_ident(std::string_view word, std::size_t ahead = 0) const
    {
        const Token& t = peek(ahead);
        return t.kind == Tok::Ident && t.text == word;
    }

    static std::string describe(const Token& t)
    {
        switch (t.kind) {
        case Tok::End:
            return "end of input";
        case Tok::Number:
            return format_number(t.number);
        case Tok::String:
            return quote_symbol(t.text);
        default:
            return t.text;
        }
    }

    [[noreturn]] static void fail(const Token& t, const std::string& message)
    {
        throw ParseError(t.line, t.column, message);
    }

    void expect_punct(std::string_view p)
    {
        if (!is_punct(p))
            fail(peek(), "expected '" + std::string(p) + "', found '" + describe(peek()) + "'");
        next();
    }

    void expect_ident(std::string_view word)
    {
        if (!is_ident(word))
            fail(peek(), "expected '" + std::string(word) + "', found '" + describe(peek()) + "'");
        next();
    }

    std::string identifier(const char* what)
    {
        if (peek().kind != Tok::Ident)
            fail(peek(), std::string("expected ") + what + ", found '" + describe(peek()) + "'");
        return next().text;
    }

    Variable variable()
    {
        const Token& t = peek();
        std::string name = identifier("a variable");
        if (is_reserved_word(name))
            fail(t, "reserved word '" + name + "' cannot be used as a variable");
        return Variable{name};
    }

    double number()
    {
        if (peek().kind != Tok::Number)
            fail(peek(), "expected a number, found '" + describe(peek()) + "'");
        return next().number;
    }

    double nonnegative(const char* what)
    {
        const Token& t = peek();
        double d = number();
        if (d < 0)
            fail(t, std::string(what) + " must be nonnegative");
        return d;
    }

    // -- programs -----------------------------------------------------------

    Program program()
    {
        Program first = simple();
        if (!is_punct(";"))
            return first;
        next();
        Program rest = program();
        return make_let(fresh_variable("x"), std::move(first), std::move(rest));
    }

    Program simple()
    {
        const Token& t = peek();
        if (is_ident("let")) {
            next();
            Variable x = variable();
            expect_punct("=");
            Program bound = program();
            expect_ident("in");
            Program body = program();
            return make_let(std::move(x), std::move(bound), std::move(body));
        }
        if (is_ident("install")) {
            next();
            Value first = value();
            if (starts_operand())
                return make_install(std::move(first), value());
            return make_install(loc(), std::move(first));
        }
        if (t.kind == Tok::Ident && !is_reserved_word(t.text) && is_punct("(", 1)) {
            Label l{next().text};
            return make_call(loc(), std::move(l), arguments());
        }
        if (is_punct("(") && !is_punct(")", 1)) {
            next();
            Program inner = program();
            expect_punct(")");
            if (auto v = inner.as<Val>(); v && is_punct("."))
                return call_on(v->value);
            return inner;
        }
        Value v = value();
        if (is_punct("."))
            return call_on(std::move(v));
        return make_value(std::move(v));
    }

    Program call_on(Value target)
    {
        expect_punct(".");
        Label l{identifier("a method label")};
        return make_call(std::move(target), std::move(l), arguments());
    }

    // Whether the token after a one-operand `install` begins a second
    // operand. An identifier followed by `=` or `(` begins the next method
    // or a bare call instead.
    bool starts_operand() const
    {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Number:
        case Tok::String:
            return true;
        case Tok::Ident:
            if (t.text == "net" || t.text == "loc")
                return true;
            if (is_reserved_word(t.text))
                return false;
            return !is_punct("=", 1) && !is_punct("(", 1);
        case Tok::Punct:
            return t.text == "{" || (t.text == "(" && is_punct(")", 1));
        case Tok::End:
            return false;
        }
        return false;
    }

    std::vector<Value> arguments()
    {
        expect_punct("(");
        std::vector<Value> args;
        if (is_punct(")")) {
            next();
            return args;
        }
        for (;;) {
            args.push_back(value());
            if (is_punct(",")) {
                next();
                continue;
            }
            expect_punct(")");
            return args;
        }
    }

    Value value()
    {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Number:
            return csn::number(next().number);
        case Tok::String:
            if (t.text.empty())
                fail(t, "symbol literals must be non-empty");
            return symbol(next().text);
        case Tok::Ident:
            if (t.text == "net") {
                next();
                return net();
            }
            if (t.text == "loc") {
                next();
                return loc();
            }
            return variable();
        case Tok::Punct:
            if (t.text == "{")
                return object();
            if (t.text == "(" && is_punct(")", 1)) {
                next();
                next();
                return csn::unit();
            }
            break;
        case Tok::End:
            break;
        }
        fail(t, "expected a value, found '" + describe(t) + "'");
    }

    Object object()
    {
        expect_punct("{");
        Object o;
        while (!is_punct("}")) {
            const Token& t = peek();
            Label l{identifier("a method label")};
            expect_punct("=");
            std::vector<Variable> params = parameters();
            Program body = program();
            if (!o.methods.emplace(l, Method{std::move(params), std::move(body)}).second)
                fail(t, "duplicate method label '" + l.name + "'");
            if (is_punct(","))
                next();
        }
        next();
        return o;
    }

    std::vector<Variable> parameters()
    {
        expect_punct("(");
        std::vector<Variable> params;
        std::set<Variable> seen;
        if (is_punct(")")) {
            next();
            return params;
        }
        for (;;) {
            const Token& t = peek();
            Variable x = variable();
            if (!seen.insert(x).second)
                fail(t, "duplicate parameter '" + x.name + "'");
            params.push_back(std::move(x));
            if (is_punct(",")) {
                next();
                continue;
            }
            expect_punct(")");
            return params;
        }
    }

    // -- types --------------------------------------------------------------

    Type type()
    {
        const Token& t = peek();
        if (is_ident("B")) {
            next();
            return Type::builtin();
        }
        if (is_ident("Net")) {
            next();
            return Type::net();
        }
        if (is_punct("{")) {
            next();
            return Type::object(ObjectKind::Plain, method_types('{', '}', true));
        }
        if (is_punct("[")) {
            next();
            return Type::object(ObjectKind::Sensor, method_types('[', ']', true));
        }
        fail(t, "expected a type, found '" + describe(t) + "'");
    }

    // Entries `label: (T, ...) -> T` separated by optional `,` or `;`.
    MethodTypes method_types(char open, char close, bool opened)
    {
        if (!opened)
            expect_punct(std::string(1, open));
        std::string closing(1, close);
        MethodTypes ms;
        while (!is_punct(closing)) {
            const Token& t = peek();
            Label l{identifier("a method label")};
            expect_punct(":");
            expect_punct("(");
            MethodType m{{}, Type::builtin()};
            if (!is_punct(")")) {
                for (;;) {
                    m.params.push_back(type());
                    if (is_punct(",")) {
                        next();
                        continue;
                    }
                    break;
                }
            }
            expect_punct(")");
            expect_punct("->");
            m.result = type();
            if (!ms.emplace(l, std::move(m)).second)
                fail(t, "duplicate method label '" + l.name + "' in type");
            if (is_punct(",") || is_punct(";"))
                next();
        }
        next();
        return ms;
    }

    // -- unit items ---------------------------------------------------------

    WorldDecl world()
    {
        WorldDecl w;
        expect_punct("{");
        while (!is_punct("}")) {
            const Token& t = peek();
            std::string key = identifier("a world setting");
            expect_punct("=");
            if (key == "e_in")
                w.e_in = nonnegative("e_in");
            else if (key == "e_out")
                w.e_out = nonnegative("e_out");
            else if (key == "field")
                w.field = field();
            else
                fail(t, "unknown world setting '" + key + "'");
            if (is_punct(";"))
                next();
        }
        next();
        return w;
    }

    FieldDecl field()
    {
        const Token& t = peek();
        std::string kind = identifier("a field model");
        expect_punct("(");
        FieldDecl out;
        if (kind == "const") {
            out = ConstantField{number()};
        } else if (kind == "gaussian") {
            GaussianField g;
            g.center.x = number();
            expect_punct(",");
            g.center.y = number();
            expect_punct(",");
            g.peak = number();
            expect_punct(",");
            const Token& s = peek();
            g.sigma = number();
            if (!(g.sigma > 0))
                fail(s, "sigma must be positive");
            out = g;
        } else if (kind == "grid") {
            GridFile g;
            if (peek().kind != Tok::String)
                fail(peek(), "expected the grid file path as a string");
            g.path = next().text;
            expect_punct(",");
            g.origin.x = number();
            expect_punct(",");
            g.origin.y = number();
            expect_punct(",");
            const Token& c = peek();
            g.cell = number();
            if (!(g.cell > 0))
                fail(c, "cell size must be positive");
            out = g;
        } else {
            fail(t, "unknown field model '" + kind + "'");
        }
        expect_punct(")");
        return out;
    }

    TemplateDef template_def()
    {
        TemplateDef def;
        const Token& t = peek();
        def.name = identifier("a template name");
        if (is_reserved_word(def.name))
            fail(t, "reserved word '" + def.name + "' cannot name a template");
        if (is_punct("("))
            def.params = parameters();
        expect_punct("=");
        if (!is_punct("{"))
            fail(peek(), "a template body must be an object literal");
        def.body = object();
        return def;
    }

    NodeDecl sensor()
    {
        NodeDecl node;
        const Token& t = peek();
        node.name = identifier("a sensor name");
        if (is_reserved_word(node.name))
            fail(t, "reserved word '" + node.name + "' cannot name a sensor");
        if (is_ident("off")) {
            next();
            node.offline = true;
            return node;
        }
        expect_ident("at");
        expect_punct("(");
        node.position.x = number();
        expect_punct(",");
        node.position.y = number();
        expect_punct(")");
        expect_ident("radius");
        node.radius = nonnegative("radius");
        expect_ident("energy");
        node.energy = nonnegative("energy");
        expect_ident("object");
        if (is_punct("{")) {
            node.object = object();
        } else {
            const Token& ref = peek();
            std::string name = identifier("a template name or object literal");
            auto it = templates_.find(name);
            if (it == templates_.end())
                fail(ref, "unknown template '" + name + "'");
            std::vector<Value> args;
            if (is_punct("("))
                args = arguments();
            const TemplateDef& def = it->second;
            if (args.size() != def.params.size())
                fail(ref, "template '" + name + "' expects " + std::to_string(def.params.size()) +
                              " argument(s), got " + std::to_string(args.size()));
            Substitution s;
            for (std::size_t i = 0; i < args.size(); ++i) {
                if (!is_closed(args[i]))
                    fail(ref, "template arguments must be closed values");
                s.emplace(def.params[i], args[i]);
            }
            node.object = substitute(def.body, s);
            node.template_name = name;
            node.template_args = std::move(args);
        }
        if (is_ident("run")) {
            next();
            node.queue.push_back(program());
            while (is_punct(",")) {
                next();
                node.queue.push_back(program());
            }
        }
        return node;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::map<std::string, TemplateDef> templates_;
};

std::string interface_text(const GlobalInterface& iface)
{
    std::string out = "interface {\n";
    for (const auto& [label, m] : iface.methods())
        out += "  " + label.name + ": " + to_string(m) + "\n";
    return out + "}\n";
}

std::string field_text(const FieldDecl& f)
{
    return std::visit(
        [](const auto& x) -> std::string {
            using X = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<X, ConstantField>) {
                return "const(" + format_number(x.value) + ")";
            } else if constexpr (std::is_same_v<X, GaussianField>) {
                return "gaussian(" + format_number(x.center.x) + ", " + format_number(x.center.y) + ", " +
                       format_number(x.peak) + ", " + format_number(x.sigma) + ")";
            } else {
                return "grid(" + quote_symbol(x.path) + ", " + format_number(x.origin.x) + ", " +
                       format_number(x.origin.y) + ", " + format_number(x.cell) + ")";
            }
        },
        f);
}

} // namespace

SourceUnit parse_network(std::string_view text)
{
    return Parser(text).unit();
}

Program parse_program(std::string_view text)
{
    return Parser(text).standalone_program();
}

Type parse_type(std::string_view text)
{
    return Parser(text).standalone_type();
}

std::string pretty_print(const SourceUnit& unit)
{
    std::string out = interface_text(unit.interface);
    out += "world { e_in = " + format_number(unit.world.e_in) + "; e_out = " + format_number(unit.world.e_out) +
           "; field = " + field_text(unit.world.field) + "; }\n";
    for (const auto& t : unit.templates) {
        out += t.name;
        if (!t.params.empty()) {
            out += "(";
            for (std::size_t i = 0; i < t.params.size(); ++i)
                out += (i ? ", " : "") + t.params[i].name;
            out += ")";
        }
        out += " = " + pretty_print(t.body) + "\n";
    }
    for (const auto& n : unit.nodes) {
        out += "sensor " + n.name;
        if (n.offline) {
            out += " off\n";
            continue;
        }
        out += " at (" + format_number(n.position.x) + ", " + format_number(n.position.y) + ") radius " +
               format_number(n.radius) + " energy " + format_number(n.energy) + " object ";
        if (n.template_name) {
            out += *n.template_name;
            if (!n.template_args.empty()) {
                out += "(";
                for (std::size_t i = 0; i < n.template_args.size(); ++i)
                    out += (i ? ", " : "") + pretty_print(n.template_args[i]);
                out += ")";
            }
        } else {
            out += pretty_print(n.object);
        }
        if (!n.queue.empty()) {
            out += " run ";
            for (std::size_t i = 0; i < n.queue.size(); ++i)
                out += (i ? ", " : "") + pretty_print(n.queue[i]);
        }
        out += "\n";
    }
    return out;
}

WorldConfig make_world(const WorldDecl& decl, const std::filesystem::path& base_dir, bool metering)
{
    WorldConfig w;
    w.e_in = decl.e_in;
    w.e_out = decl.e_out;
    w.metering = metering;
    w.field = std::visit(
        [&](const auto& f) -> FieldModel {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, GridFile>) {
                std::filesystem::path p(f.path);
                if (p.is_relative())
                    p = base_dir / p;
                return load_grid_csv(p, f.origin, f.cell);
            } else {
                return f;
            }
        },
        decl.field);
    return w;
}

Network make_network(const SourceUnit& unit, std::shared_ptr<const WorldConfig> world)
{
    Network n;
    n.world = std::move(world);
    for (const auto& decl : unit.nodes) {
        Sensor s;
        s.id = decl.name;
        s.status = decl.offline ? SensorStatus::Off : SensorStatus::Online;
        s.position = decl.position;
        s.radius = decl.radius;
        s.energy = decl.energy;
        s.object = decl.object;
        s.queue.assign(decl.queue.begin(), decl.queue.end());
        n.sensors.push_back(std::move(s));
    }
    return n;
}

SourceUnit to_source_unit(const Network& n, const GlobalInterface& iface)
{
    SourceUnit u;
    u.interface = iface;
    u.world.e_in = n.world->e_in;
    u.world.e_out = n.world->e_out;
    if (auto c = std::get_if<ConstantField>(&n.world->field))
        u.world.field = *c;
    else if (auto g = std::get_if<GaussianField>(&n.world->field))
        u.world.field = *g;
    for (const auto& s : n.sensors) {
        NodeDecl d;
        d.name = s.id;
        d.offline = s.status == SensorStatus::Off;
        d.position = s.position;
        d.radius = s.radius;
        d.energy = s.energy;
        d.object = s.object;
        d.queue.assign(s.queue.begin(), s.queue.end());
        u.nodes.push_back(std::move(d));
    }
    return u;
}

} // namespace csn
