#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "csn/parser.hpp"
#include "csn/typecheck.hpp"
#include "support.hpp"

using namespace csn;

namespace {

GlobalInterface ping_iface()
{
    return parse_network("interface { ping: () -> {}, forward: (B) -> {}, field: () -> B, log_mac: (B) -> {},"
                         " log_field: (B) -> {} }")
        .interface;
}

Type type_of(const std::string& text, const GlobalInterface& iface = ping_iface())
{
    return type_of_program({}, iface, parse_program(text));
}

TypeErrorCode error_of(const std::string& text, const GlobalInterface& iface = ping_iface())
{
    try {
        type_of(text, iface);
    } catch (const TypeError& e) {
        return e.code();
    }
    FAIL("expected a type error: " << text);
    return TypeErrorCode::TypeMismatch;
}

Sensor sensor(const std::string& object, const std::string& run = "")
{
    Sensor s;
    s.id = "s";
    s.object = *as_object(parse_program(object).as<Val>()->value);
    if (!run.empty())
        s.queue.push_back(parse_program(run));
    return s;
}

TypeErrorCode sensor_error(const Sensor& s, const GlobalInterface& iface = ping_iface())
{
    try {
        check_sensor(iface, s);
    } catch (const TypeError& e) {
        return e.code();
    }
    FAIL("expected a type error in sensor");
    return TypeErrorCode::TypeMismatch;
}

} // namespace

TEST_CASE("values")
{
    auto iface = ping_iface();
    CHECK(type_of("3") == Type::builtin());
    CHECK(type_of("\"m1\"") == Type::builtin());
    CHECK(type_of("()") == Type::builtin());
    CHECK(type_of("net") == Type::net());
    CHECK(type_of("loc") == iface.type);
    CHECK(type_of("{}") == Type::empty_object());
    CHECK(to_string(type_of("{ f = (x) x.g() }", GlobalInterface{})) == "{f: (?0) -> ?1}");
    CHECK(to_string(type_of("{ f = () 1, g = (y) log_mac(y) }")) == "{f: () -> B, g: (B) -> {}}");
}

TEST_CASE("calls")
{
    CHECK(type_of("loc.field()") == Type::builtin());
    CHECK(type_of("net.forward(1)") == Type::empty_object());
    CHECK(type_of("let f = loc.field() in net.forward(f); loc.ping()") == Type::empty_object());
    CHECK(type_of("{ f = (x) x }.f(3)") == Type::builtin());
    // A parameter used both as a broadcast argument and a builtin.
    CHECK(type_of("{ f = (x) net.forward(x); log_mac(x) }.f(\"m\")") == Type::empty_object());
}

TEST_CASE("call errors")
{
    CHECK(error_of("net.nope()") == TypeErrorCode::NoSuchMethod);
    CHECK(error_of("loc.nope()") == TypeErrorCode::NoSuchMethod);
    CHECK(error_of("{}.f()") == TypeErrorCode::NoSuchMethod);
    CHECK(error_of("loc.ping(1)") == TypeErrorCode::ArityMismatch);
    CHECK(error_of("net.forward({})") == TypeErrorCode::ArgumentTypeMismatch);
    CHECK(error_of("3.f()") == TypeErrorCode::TargetNotNetOrObject);
    CHECK(error_of("x.f()") == TypeErrorCode::UnboundVariable);
    CHECK(error_of("let y = loc.field() in y.f()") == TypeErrorCode::TargetNotNetOrObject);
}

TEST_CASE("installs")
{
    auto iface = ping_iface();
    CHECK(type_of("install { ping = () net.ping() }") == iface.type);
    CHECK(type_of("install {} { f = () 1 }") == parse_type("{ f: () -> B }"));
    CHECK(type_of("install { f = () 1 } { f = () {} }") == parse_type("{ f: () -> {} }"));
    CHECK(error_of("install 3 loc") == TypeErrorCode::TargetNotObject);
    CHECK(error_of("install net {}") == TypeErrorCode::TargetNotObject);
    CHECK(error_of("install { f = () 1 } loc") == TypeErrorCode::IllegalInstallCombination);
    CHECK(error_of("install { ping = () 1 }") == TypeErrorCode::InstallBreaksInterface);
    CHECK(error_of("install { extra = () {} }") == TypeErrorCode::InstallBreaksInterface);
}

TEST_CASE("conforming literals read as the interface when needed")
{
    // `loc.f()` on a literal missing f but conforming to the interface.
    CHECK(type_of("{ ping = () net.ping() }.forward(1)") == Type::empty_object());
    // As an install operand it stays plain when that suffices.
    CHECK(type_of("install {} { ping = () net.ping() }") == parse_type("{ ping: () -> {} }"));
    // A literal with free variables never reads as the interface.
    CHECK(error_of("let m = 1 in install { ping = () net.forward(m) } loc") ==
          TypeErrorCode::IllegalInstallCombination);
}

TEST_CASE("type_combine")
{
    auto s = parse_type("[f: () -> B, g: () -> B]");
    auto p = parse_type("{g: () -> {}, h: (B) -> B}");
    CHECK(type_combine(s, p) == parse_type("[f: () -> B, g: () -> {}, h: (B) -> B]"));
    CHECK(type_combine(p, p) == p);
    CHECK(type_combine(s, s) == s);
    CHECK_THROWS_AS(type_combine(p, s), TypeError);
    CHECK_THROWS_AS(type_combine(Type::builtin(), p), TypeError);
    try {
        type_combine(p, s);
    } catch (const TypeError& e) {
        CHECK(e.code() == TypeErrorCode::IllegalInstallCombination);
    }
}

TEST_CASE("type_combine agrees with object update on every small object")
{
    // Objects over labels a, b, c whose methods return B, {} or are absent:
    // the type of O1 + O2 must be the combination of the two types.
    const char* labels[] = {"a", "b", "c"};
    auto build = [&](int code) {
        Object o;
        for (int i = 0; i < 3; ++i, code /= 3) {
            if (code % 3 == 1)
                o.methods.emplace(Label{labels[i]}, Method{{}, make_value(number(i))});
            else if (code % 3 == 2)
                o.methods.emplace(Label{labels[i]}, Method{{}, make_value(empty_object())});
        }
        return o;
    };
    GlobalInterface none;
    int cases = 0;
    for (int x = 0; x < 27; ++x) {
        for (int y = 0; y < 27; ++y) {
            Object o1 = build(x), o2 = build(y);
            Type t1 = type_of_value({}, none, o1);
            Type t2 = type_of_value({}, none, o2);
            Type expected = type_of_value({}, none, object_update(o1, o2));
            CHECK(type_combine(t1, t2) == expected);
            Type sensor_kind = Type::object(ObjectKind::Sensor, t1.methods());
            CHECK(type_combine(sensor_kind, t2) == Type::object(ObjectKind::Sensor, expected.methods()));
            ++cases;
        }
    }
    CHECK(cases == 729);
}

TEST_CASE("sensors")
{
    auto iface = ping_iface();
    CHECK_NOTHROW(check_sensor(iface, sensor("{ ping = () net.forward(\"m\"); net.ping(), forward = (x) net.forward(x) }",
                                             "net.ping()")));
    CHECK(sensor_error(sensor("{ extra = () {} }")) == TypeErrorCode::MethodNotInInterface);
    CHECK(sensor_error(sensor("{ forward = () {} }")) == TypeErrorCode::SignatureMismatch);
    CHECK(sensor_error(sensor("{ ping = () 1 }")) == TypeErrorCode::SignatureMismatch);
    CHECK(sensor_error(sensor("{ forward = (x) x.f() }")) == TypeErrorCode::TargetNotNetOrObject);
    CHECK(sensor_error(sensor("{}", "net.nope()")) == TypeErrorCode::NoSuchMethod);

    Sensor off = sensor("{ extra = () {} }");
    off.status = SensorStatus::Off;
    CHECK_NOTHROW(check_sensor(iface, off));
}

TEST_CASE("corpus networks")
{
    for (const char* name : {"ping.csn", "ping-micro.csn", "polling.csn", "deploy.csn", "deploy-race.csn",
                             "grid-poll.csn"}) {
        INFO(name);
        auto l = test::load_corpus(name);
        CHECK(check_network(l.unit.interface, l.network).empty());
        CHECK(validate_interface(l.unit.interface, *l.network.world->builtins).empty());
    }
    auto bad = test::load_corpus("bad-install.csn");
    auto errors = check_network(bad.unit.interface, bad.network);
    REQUIRE(errors.size() == 1);
    CHECK(errors[0].code() == TypeErrorCode::IllegalInstallCombination);
    CHECK(errors[0].sensor() == "sink");
}

TEST_CASE("every error is reported, in sensor order")
{
    Network n;
    Sensor a = sensor("{ extra = () {} }", "net.nope()");
    a.id = "a";
    Sensor b = sensor("{}", "loc.ping(1)");
    b.id = "b";
    n.sensors = {a, b};
    auto errors = check_network(ping_iface(), n);
    REQUIRE(errors.size() == 3);
    CHECK(errors[0].code() == TypeErrorCode::MethodNotInInterface);
    CHECK(errors[1].code() == TypeErrorCode::NoSuchMethod);
    CHECK(errors[2].code() == TypeErrorCode::ArityMismatch);
    CHECK(errors[2].sensor() == "b");
    CHECK(errors[2].location() == "queue[0]");
}

TEST_CASE("interface built-ins keep their signatures")
{
    auto iface = parse_network("interface { field: (B) -> B }").interface;
    auto errors = validate_interface(iface, BuiltinTable::standard());
    REQUIRE(errors.size() == 1);
    CHECK(errors[0].code() == TypeErrorCode::InterfaceBuiltinMismatch);
}
