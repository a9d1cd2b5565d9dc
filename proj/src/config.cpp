#include "roadfield/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "roadfield/csv.hpp"
#include "roadfield/errors.hpp"

namespace roadfield {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_number(const std::string& v, int line, const std::string& key) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("key '" + key + "': not a number: '" + v + "'", line, key);
    return x;
}

int parse_int(const std::string& v, int line, const std::string& key) {
    const double x = parse_number(v, line, key);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x)
        throw ConfigError("key '" + key + "': not an integer: '" + v + "'", line, key);
    return i;
}

SweepRange parse_range(const std::string& v, int line, const std::string& key) {
    SweepRange r;
    const size_t c1 = v.find(':');
    if (c1 == std::string::npos) {
        r.start = r.stop = parse_number(v, line, key);
        r.count = 1;
        return r;
    }
    const size_t c2 = v.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw ConfigError("key '" + key + "': ranges are start:stop:count", line, key);
    r.start = parse_number(trim(v.substr(0, c1)), line, key);
    r.stop = parse_number(trim(v.substr(c1 + 1, c2 - c1 - 1)), line, key);
    r.count = parse_int(trim(v.substr(c2 + 1)), line, key);
    if (r.count < 1) throw ConfigError("key '" + key + "': count must be >= 1", line, key);
    return r;
}

std::vector<double> parse_list(const std::string& v, int line, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_number(item, line, key));
    }
    return out;
}

void check(bool ok, const char* msg, int line, const std::string& key) {
    if (!ok) throw ConfigError("key '" + key + "': " + msg, line, key);
}

}  // namespace

std::vector<double> SweepRange::values() const {
    std::vector<double> v;
    v.reserve(count);
    if (count == 1) {
        v.push_back(start);
        return v;
    }
    for (int k = 0; k < count; ++k) v.push_back(start + (stop - start) * k / (count - 1));
    return v;
}

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string s = trim(raw);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError("malformed section header", line);
            section = trim(s.substr(1, s.size() - 2));
            if (section != "model" && section != "field" && section != "road" &&
                section != "grid" && section != "sweep")
                throw ConfigError("unknown section [" + section + "]", line, section);
            continue;
        }
        const size_t eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value", line);
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key.empty() || val.empty()) throw ConfigError("expected key = value", line);

        auto numeric = [&] { return parse_number(val, line, key); };
        if (section == "model") {
            if (key == "d") {
                c.d = numeric();
                check(c.d > 0, "d must be > 0", line, key);
            } else if (key == "D") {
                c.D = numeric();
                check(c.D > 0, "D must be > 0", line, key);
            } else if (key == "mu") {
                c.mu = numeric();
                check(c.mu > 0, "mu must be > 0", line, key);
            } else if (key == "nu") {
                c.nu = numeric();
                check(c.nu > 0, "nu must be > 0", line, key);
            } else if (key == "q") {
                c.q = numeric();
            } else if (key == "direction") {
                c.direction = parse_int(val, line, key);
                check(c.direction == 1 || c.direction == -1, "direction must be +1 or -1", line,
                      key);
            } else {
                throw ConfigError("unknown key '" + key + "' in [model]", line, key);
            }
        } else if (section == "field") {
            if (key == "kind") {
                check(val == "logistic", "field kind must be 'logistic'", line, key);
                c.field.kind = val;
            } else if (key == "r") {
                c.field.r = numeric();
                check(c.field.r > 0, "r must be > 0", line, key);
            } else {
                throw ConfigError("unknown key '" + key + "' in [field]", line, key);
            }
        } else if (section == "road") {
            if (key == "kind") {
                check(val == "zero" || val == "mortality" || val == "logistic",
                      "road kind must be zero|mortality|logistic", line, key);
                c.road.kind = val;
            } else if (key == "rho") {
                c.road.rho = numeric();
                check(c.road.rho >= 0, "rho must be >= 0", line, key);
            } else if (key == "slope") {
                c.road.slope = numeric();
                check(c.road.slope > 0, "slope must be > 0", line, key);
            } else if (key == "cap") {
                c.road.cap = numeric();
                check(c.road.cap > 0, "cap must be > 0", line, key);
            } else {
                throw ConfigError("unknown key '" + key + "' in [road]", line, key);
            }
        } else if (section == "grid") {
            if (key == "Lx") {
                c.Lx = numeric();
                check(c.Lx > 0, "Lx must be > 0", line, key);
            } else if (key == "Ly") {
                c.Ly = numeric();
                check(c.Ly > 0, "Ly must be > 0", line, key);
            } else if (key == "dx") {
                c.dx = numeric();
                check(c.dx > 0, "dx must be > 0", line, key);
            } else if (key == "dy") {
                c.dy = numeric();
                check(c.dy > 0, "dy must be > 0", line, key);
            } else if (key == "dt") {
                c.dt = numeric();
                check(c.dt >= 0, "dt must be >= 0", line, key);
            } else if (key == "T") {
                c.T = numeric();
                check(c.T > 0, "T must be > 0", line, key);
            } else if (key == "record_dt") {
                c.record_dt = numeric();
                check(c.record_dt > 0, "record_dt must be > 0", line, key);
            } else if (key == "level") {
                c.level = numeric();
                check(c.level > 0 && c.level < 1, "level must lie in (0,1)", line, key);
            } else if (key == "fit_window") {
                c.fit_window = numeric();
                check(c.fit_window > 0 && c.fit_window <= 1, "fit_window must lie in (0,1]",
                      line, key);
            } else if (key == "u0_amp") {
                c.u0_amp = numeric();
                check(c.u0_amp > 0, "u0_amp must be > 0", line, key);
            } else if (key == "u0_halfwidth") {
                c.u0_halfwidth = numeric();
                check(c.u0_halfwidth > 0, "u0_halfwidth must be > 0", line, key);
            } else if (key == "threads") {
                c.threads = parse_int(val, line, key);
                check(c.threads >= 0, "threads must be >= 0", line, key);
            } else if (key == "snapshots") {
                c.snapshots = parse_list(val, line, key);
            } else {
                throw ConfigError("unknown key '" + key + "' in [grid]", line, key);
            }
        } else if (section == "sweep") {
            if (key == "D") {
                c.sweep_D = parse_range(val, line, key);
                check(c.sweep_D->start > 0 && c.sweep_D->stop > 0, "D must be > 0", line, key);
            } else if (key == "q") {
                c.sweep_q = parse_range(val, line, key);
            } else if (key == "rho") {
                c.sweep_rho = parse_range(val, line, key);
                check(c.sweep_rho->start >= 0 && c.sweep_rho->stop >= 0, "rho must be >= 0",
                      line, key);
            } else if (key == "seed") {
                c.seed = static_cast<unsigned long>(parse_number(val, line, key));
            } else {
                throw ConfigError("unknown key '" + key + "' in [sweep]", line, key);
            }
        } else {
            throw ConfigError("key outside any section", line, key);
        }
    }
    return c;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string emit_config(const RunConfig& c) {
    std::string out;
    auto kv = [&out](const char* k, const std::string& v) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    };
    out += "[model]\n";
    kv("d", csv_num(c.d));
    kv("D", csv_num(c.D));
    kv("mu", csv_num(c.mu));
    kv("nu", csv_num(c.nu));
    kv("q", csv_num(c.q));
    kv("direction", std::to_string(c.direction));
    out += "\n[field]\n";
    kv("kind", c.field.kind);
    kv("r", csv_num(c.field.r));
    out += "\n[road]\n";
    kv("kind", c.road.kind);
    kv("rho", csv_num(c.road.rho));
    kv("slope", csv_num(c.road.slope));
    kv("cap", csv_num(c.road.cap));
    out += "\n[grid]\n";
    kv("Lx", csv_num(c.Lx));
    kv("Ly", csv_num(c.Ly));
    kv("dx", csv_num(c.dx));
    kv("dy", csv_num(c.dy));
    kv("dt", csv_num(c.dt));
    kv("T", csv_num(c.T));
    kv("record_dt", csv_num(c.record_dt));
    kv("level", csv_num(c.level));
    kv("fit_window", csv_num(c.fit_window));
    kv("u0_amp", csv_num(c.u0_amp));
    kv("u0_halfwidth", csv_num(c.u0_halfwidth));
    kv("threads", std::to_string(c.threads));
    if (!c.snapshots.empty()) {
        std::string list;
        for (size_t i = 0; i < c.snapshots.size(); ++i)
            list += (i ? "," : "") + csv_num(c.snapshots[i]);
        kv("snapshots", list);
    }
    const bool any_sweep = c.sweep_D || c.sweep_q || c.sweep_rho || c.seed != 0;
    if (any_sweep) {
        out += "\n[sweep]\n";
        auto range = [&kv](const char* k, const SweepRange& r) {
            kv(k, csv_num(r.start) + ":" + csv_num(r.stop) + ":" + std::to_string(r.count));
        };
        if (c.sweep_D) range("D", *c.sweep_D);
        if (c.sweep_q) range("q", *c.sweep_q);
        if (c.sweep_rho) range("rho", *c.sweep_rho);
        if (c.seed != 0) kv("seed", std::to_string(c.seed));
    }
    return out;
}

ModelParams RunConfig::make_params() const { return ModelParams(d, D, mu, nu, q); }

FieldReaction RunConfig::make_field() const { return FieldReaction::logistic(field.r); }

RoadReaction RunConfig::make_road() const {
    if (road.kind == "zero") return RoadReaction::zero();
    if (road.kind == "mortality") return RoadReaction::mortality(road.rho);
    return RoadReaction::logistic(road.slope, road.cap);
}

GridSpec RunConfig::make_grid() const {
    GridSpec g;
    g.Lx = Lx;
    g.Ly = Ly;
    g.dx = dx;
    g.dy = dy;
    g.dt = dt;
    g.T = T;
    g.record_dt = record_dt;
    return g;
}

SimSetup RunConfig::make_setup() const {
    return SimSetup{make_params(), make_field(), make_road(), make_grid(),
                    level,         fit_window,   u0_amp,      u0_halfwidth,
                    snapshots,     threads};
}

}  // namespace roadfield
