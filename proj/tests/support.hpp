#pragma once

#include "csn/parser.hpp"
#include "csn/syntax.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>

namespace csn::test {

inline std::string corpus_path(const std::string& name)
{
    return std::string(CSN_CORPUS_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Loaded {
    SourceUnit unit;
    Network network;
};

inline Loaded load_text(const std::string& text, const std::filesystem::path& dir = CSN_CORPUS_DIR,
                        bool metering = false)
{
    Loaded l{parse_network(text), {}};
    l.network = make_network(l.unit, std::make_shared<const WorldConfig>(make_world(l.unit.world, dir, metering)));
    return l;
}

inline Loaded load_corpus(const std::string& name, bool metering = false)
{
    return load_text(read_file(corpus_path(name)), CSN_CORPUS_DIR, metering);
}

/// Random, untyped terms over a small alphabet, for syntax-level laws.
class TermGen {
public:
    explicit TermGen(std::uint64_t seed) : rng_(seed) {}

    int below(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }

    Variable variable()
    {
        static const char* names[] = {"x", "y", "z", "w", "m", "f"};
        return Variable{names[below(6)]};
    }

    // Generated names only ever appear as let binders, as with `P; Q`.
    Variable binder() { return below(4) == 0 ? fresh_variable("x") : variable(); }

    Label label()
    {
        static const char* labels[] = {"f", "g", "ping", "forward", "in", "sample"};
        return Label{labels[below(6)]};
    }

    Value value(int depth)
    {
        switch (below(depth > 0 ? 8 : 6)) {
        case 0:
            return number(random_number());
        case 1:
            return symbol(random_symbol());
        case 2:
            return unit();
        case 3:
            return net();
        case 4:
            return loc();
        case 5:
            return variable();
        default:
            return object(depth - 1);
        }
    }

    Object object(int depth)
    {
        Object o;
        int n = below(3);
        for (int i = 0; i < n; ++i) {
            Method m{{}, program(depth)};
            int params = below(3);
            for (int k = 0; k < params; ++k) {
                Variable p = variable();
                if (std::find(m.params.begin(), m.params.end(), p) == m.params.end())
                    m.params.push_back(p);
            }
            o.methods.insert_or_assign(label(), std::move(m));
        }
        return o;
    }

    Program program(int depth)
    {
        if (depth <= 0)
            return make_value(value(0));
        switch (below(5)) {
        case 0:
            return make_value(value(depth));
        case 1: {
            std::vector<Value> args;
            for (int n = below(3); n > 0; --n)
                args.push_back(value(depth - 1));
            return make_call(value(depth - 1), label(), std::move(args));
        }
        case 2:
            return make_install(value(depth - 1), value(depth - 1));
        default:
            return make_let(binder(), program(depth - 1), program(depth - 1));
        }
    }

private:
    double random_number()
    {
        switch (below(4)) {
        case 0:
            return below(100);
        case 1:
            return -below(100) - 0.25;
        case 2:
            return std::ldexp(static_cast<double>(rng_() >> 11), -below(80));
        default:
            return 1e300 / (1 + below(1000));
        }
    }

    std::string random_symbol()
    {
        static const char* pieces[] = {"m", "1", "\"", "\\", "\n", " ", "mac:", "\xc3\xa9"};
        std::string s;
        for (int n = 1 + below(4); n > 0; --n)
            s += pieces[below(8)];
        return s;
    }

    std::mt19937_64 rng_;
};

} // namespace csn::test
