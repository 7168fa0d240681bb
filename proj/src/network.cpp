#include "csn/network.hpp"

#include "csn/printer.hpp"

#include <algorithm>

namespace csn {

const Sensor* Network::find(const std::string& id) const
{
    auto it = std::find_if(sensors.begin(), sensors.end(), [&](const Sensor& s) { return s.id == id; });
    return it == sensors.end() ? nullptr : &*it;
}

Sensor* Network::find(const std::string& id)
{
    auto it = std::find_if(sensors.begin(), sensors.end(), [&](const Sensor& s) { return s.id == id; });
    return it == sensors.end() ? nullptr : &*it;
}

bool is_active(const Sensor& s, const WorldConfig& world)
{
    return s.status == SensorStatus::Online && s.energy >= std::min(world.e_in, world.e_out);
}

std::string canonical_form(const Sensor& s)
{
    const PrintOptions raw{false};
    std::string out = s.id;
    if (s.status == SensorStatus::Off)
        return out + " off";
    out += " @" + format_number(s.position.x) + "," + format_number(s.position.y);
    out += " r" + format_number(s.radius) + " e" + format_number(s.energy);
    out += " " + pretty_print(alpha_normalize(s.object), raw);
    for (const auto& p : s.queue)
        out += " | " + pretty_print(alpha_normalize(p), raw);
    if (s.membrane) {
        out += " <";
        for (const auto& id : s.membrane->delivered)
            out += " " + id;
        out += " >";
    }
    return out;
}

std::string canonical_form(const Network& n)
{
    std::vector<std::string> forms;
    forms.reserve(n.sensors.size());
    for (const auto& s : n.sensors)
        forms.push_back(canonical_form(s));
    std::sort(forms.begin(), forms.end());
    std::string out;
    for (const auto& f : forms)
        out += f + "\n";
    return out;
}

} // namespace csn
