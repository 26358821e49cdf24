#include "attocell/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

namespace attocell {
namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

// One scalar with an optional power suffix: `1.5`, `30 dBm` (only where dBm
// makes sense: transmit and noise power).
double parse_number(const std::string& raw, int line, const std::string& key, bool allow_dbm) {
    const std::string s = trim(raw);
    if (s.empty()) fail(line, "key '" + key + "' has an empty value");
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) fail(line, "key '" + key + "': '" + s + "' is not a number");
    const std::string rest = lower(trim(std::string(end)));
    double out = v;
    if (rest == "dbm") {
        if (!allow_dbm)
            fail(line, "key '" + key + "': unit 'dBm' is only valid for ptx and n0bf");
        out = std::pow(10.0, (v - 30.0) / 10.0);  // dBm -> watts
    } else if (!rest.empty()) {
        fail(line, "key '" + key + "': unrecognized text '" + rest + "' after the number");
    }
    if (!std::isfinite(out)) fail(line, "key '" + key + "' must be finite");
    return out;
}

std::vector<double> parse_list(const std::string& raw, int line, const std::string& key) {
    std::vector<double> out;
    for (const std::string& part : split(raw, ','))
        out.push_back(parse_number(part, line, key, false));
    if (out.empty()) fail(line, "key '" + key + "' needs at least one value");
    return out;
}

long long parse_integer(const std::string& raw, int line, const std::string& key) {
    const std::string s = trim(raw);
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
        fail(line, "key '" + key + "': '" + s + "' is not an integer");
    return v;
}

std::uint64_t parse_seed(const std::string& raw, int line) {
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '-') fail(line, "key 'seed': must be a non-negative integer");
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
        fail(line, "key 'seed': '" + s + "' is not an integer");
    return v;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* engine_name(Engine e) {
    switch (e) {
        case Engine::ANALYTIC: return "analytic";
        case Engine::MC: return "mc";
        default: return "both";
    }
}

}  // namespace

std::vector<double> ExperimentConfig::effective_tau_grid() const {
    if (tau_grid) return *tau_grid;
    std::vector<double> out;
    for (int db = 0; db <= 30; ++db) out.push_back(std::pow(10.0, db / 10.0));
    return out;
}

std::vector<double> ExperimentConfig::effective_rho_grid() const {
    if (rho_grid) return *rho_grid;
    std::vector<double> out;
    for (int i = 0; i < 20; ++i) out.push_back(std::pow(10.0, 7.0 + 3.0 * i / 19.0));
    return out;
}

ExperimentConfig default_config() {
    ExperimentConfig cfg;
    const double a = cfg.params.room_half_side;
    const double half = a / std::sqrt(2.0);
    cfg.locations = {{"corner", Vec2{a, a}},
                     {"edge", Vec2{a, 0.0}},
                     {"halfway", Vec2{half, half}},
                     {"center", Vec2{0.0, 0.0}},
                     {"typical", std::nullopt}};
    return cfg;
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;  // defaults; locations resolved at the end
    std::map<std::string, int> key_lines;

    struct CustomLocation {
        std::string name;
        std::optional<Vec2> point;
        int line;
    };
    std::vector<CustomLocation> customs;
    std::vector<std::string> selection;
    int selection_line = 0;
    bool have_selection = false;

    const std::vector<std::string> raw_lines = split(text, '\n');
    for (std::size_t li = 0; li < raw_lines.size(); ++li) {
        const int line = static_cast<int>(li) + 1;
        std::string s = raw_lines[li];
        if (const std::size_t hash = s.find('#'); hash != std::string::npos) s.resize(hash);
        s = trim(s);
        if (s.empty()) continue;

        const std::size_t eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected 'key = value', got '" + s + "'");
        const std::string key = lower(trim(s.substr(0, eq)));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) fail(line, "missing key before '='");
        key_lines[key] = line;

        if (key == "a") {
            cfg.params.room_half_side = parse_number(value, line, key, false);
        } else if (key == "h") {
            cfg.params.height = parse_number(value, line, key, false);
        } else if (key == "lambda") {
            cfg.params.density = parse_number(value, line, key, false);
        } else if (key == "lambda_u") {
            cfg.params.user_density = parse_number(value, line, key, false);
        } else if (key == "psi_half") {
            cfg.params.semi_angle_deg = parse_number(value, line, key, false);
        } else if (key == "a_pd") {
            cfg.params.pd_area = parse_number(value, line, key, false);
        } else if (key == "xi") {
            cfg.params.responsivity = parse_number(value, line, key, false);
        } else if (key == "g_f") {
            cfg.params.filter_gain = parse_number(value, line, key, false);
        } else if (key == "g_c") {
            cfg.params.concentrator_gain = parse_number(value, line, key, false);
        } else if (key == "ptx") {
            cfg.params.tx_power = parse_number(value, line, key, true);
        } else if (key == "n0bf") {
            cfg.params.noise_power = parse_number(value, line, key, true);
        } else if (key == "w") {
            cfg.params.bandwidth = parse_number(value, line, key, false);
        } else if (key == "zeta1") {
            cfg.params.zeta1 = parse_number(value, line, key, false);
        } else if (key == "zeta2") {
            cfg.params.zeta2 = parse_number(value, line, key, false);
        } else if (key == "eta") {
            cfg.params.reflection_coeff = parse_number(value, line, key, false);
        } else if (key == "k") {
            cfg.params.max_order = static_cast<int>(parse_integer(value, line, key));
        } else if (key == "mode") {
            const std::string m = lower(value);
            if (m == "independent")
                cfg.mode = SampleMode::INDEPENDENT;
            else if (m == "mirrored")
                cfg.mode = SampleMode::MIRRORED;
            else
                fail(line, "mode must be 'independent' or 'mirrored', got '" + value + "'");
        } else if (key == "engine") {
            const std::string e = lower(value);
            if (e == "analytic")
                cfg.engine = Engine::ANALYTIC;
            else if (e == "mc")
                cfg.engine = Engine::MC;
            else if (e == "both")
                cfg.engine = Engine::BOTH;
            else
                fail(line, "engine must be 'analytic', 'mc' or 'both', got '" + value + "'");
        } else if (key == "trials") {
            cfg.trials = static_cast<long>(parse_integer(value, line, key));
        } else if (key == "seed") {
            cfg.seed = parse_seed(value, line);
        } else if (key == "rel_tol") {
            cfg.quad.rel_tol = parse_number(value, line, key, false);
        } else if (key == "abs_tol") {
            cfg.quad.abs_tol = parse_number(value, line, key, false);
        } else if (key == "grid_n") {
            cfg.grid_n = static_cast<int>(parse_integer(value, line, key));
        } else if (key == "tau_db") {
            std::vector<double> taus;
            for (double db : parse_list(value, line, key))
                taus.push_back(std::pow(10.0, db / 10.0));
            cfg.tau_grid = std::move(taus);
        } else if (key == "tau") {
            cfg.tau_grid = parse_list(value, line, key);
        } else if (key == "rho") {
            cfg.rho_grid = parse_list(value, line, key);
        } else if (key == "corollary_taus") {
            cfg.corollary_taus = parse_list(value, line, key);
        } else if (key == "out") {
            if (value.empty()) fail(line, "key 'out' needs a path");
            cfg.output_path = value;
        } else if (key == "locations") {
            selection.clear();
            for (const std::string& part : split(value, ',')) {
                const std::string name = lower(trim(part));
                if (name.empty()) fail(line, "empty name in 'locations'");
                selection.push_back(name);
            }
            have_selection = true;
            selection_line = line;
        } else if (key.rfind("location.", 0) == 0) {
            const std::string name = key.substr(9);
            if (name.empty()) fail(line, "location key needs a name: location.<name>");
            CustomLocation loc{name, std::nullopt, line};
            if (lower(value) != "typical") {
                std::string coords = value;
                for (char& c : coords)
                    if (c == ',') c = ' ';
                std::istringstream in(coords);
                double x = 0.0, y = 0.0;
                std::string extra;
                if (!(in >> x >> y) || (in >> extra))
                    fail(line, "location '" + name + "' needs 'x y' coordinates or 'typical'");
                loc.point = Vec2{x, y};
            }
            bool replaced = false;
            for (CustomLocation& c : customs)
                if (c.name == name) {
                    c = loc;
                    replaced = true;
                }
            if (!replaced) customs.push_back(loc);
        } else {
            fail(line, "unknown key '" + key + "'");
        }
    }

    // Assemble the location list: defaults for the final room size, then
    // custom definitions (overriding by name), then the optional selection.
    std::vector<NamedLocation> all = default_config().locations;
    const double a = cfg.params.room_half_side;
    if (a > 0.0) {
        const double half = a / std::sqrt(2.0);
        all[0].point = Vec2{a, a};
        all[1].point = Vec2{a, 0.0};
        all[2].point = Vec2{half, half};
    }
    for (const CustomLocation& c : customs) {
        bool replaced = false;
        for (NamedLocation& loc : all)
            if (loc.name == c.name) {
                loc.point = c.point;
                replaced = true;
            }
        if (!replaced) all.push_back({c.name, c.point});
    }
    if (have_selection) {
        std::vector<NamedLocation> chosen;
        for (const std::string& name : selection) {
            bool found = false;
            for (const NamedLocation& loc : all)
                if (loc.name == name) {
                    chosen.push_back(loc);
                    found = true;
                    break;
                }
            if (!found) fail(selection_line, "unknown location '" + name + "' in 'locations'");
        }
        cfg.locations = std::move(chosen);
    } else {
        cfg.locations = std::move(all);
    }

    // Constraint validation, attributed to the lines that set the values.
    auto line_of = [&key_lines](const char* key) {
        auto it = key_lines.find(key);
        return it == key_lines.end() ? 0 : it->second;
    };
    auto check = [&](bool ok, const char* key, const std::string& msg) {
        if (ok) return;
        const int line = line_of(key);
        if (line > 0) fail(line, msg);
        throw ConfigError("config: " + msg);
    };

    try {
        cfg.params.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("config: " + std::string(e.what()));
    }
    check(cfg.params.max_order <= 4, "k", "k (reflection order) must be at most 4");
    check(cfg.trials >= 1 && cfg.trials <= 2000000000L, "trials",
          "trials must lie in [1, 2e9]");
    check(cfg.grid_n >= 2 && cfg.grid_n <= 64, "grid_n", "grid_n must lie in [2, 64]");
    check(cfg.quad.rel_tol > 0.0, "rel_tol", "rel_tol must be > 0");
    check(cfg.quad.abs_tol > 0.0, "abs_tol", "abs_tol must be > 0");

    const char* tau_key = key_lines.count("tau_db") ? "tau_db" : "tau";
    if (cfg.tau_grid) {
        for (double tau : *cfg.tau_grid) {
            check(tau > 0.0, tau_key, "thresholds must be positive");
            if (cfg.engine != Engine::MC)
                check(tau >= 1.0, tau_key,
                      "thresholds below one are not valid for the analytic engine "
                      "(use engine = mc)");
        }
    }
    if (cfg.rho_grid)
        for (double rho : *cfg.rho_grid)
            check(rho >= 0.0, "rho", "rate targets must be >= 0");
    for (double tau : cfg.corollary_taus)
        check(tau >= 1.0, "corollary_taus", "corollary thresholds must be >= 1");

    for (const NamedLocation& loc : cfg.locations) {
        if (!loc.point) continue;
        if (std::fabs(loc.point->x) > a || std::fabs(loc.point->y) > a) {
            const std::string key = "location." + loc.name;
            const int line = line_of(key.c_str());
            const std::string msg = "location '" + loc.name + "' lies outside the room";
            if (line > 0) fail(line, msg);
            throw ConfigError("config: " + msg);
        }
    }

    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string dump_config(const ExperimentConfig& config) {
    std::ostringstream out;
    const NetworkParams& p = config.params;
    out << "# effective configuration dump; reloads to an identical run\n";
    out << "a = " << format_number(p.room_half_side) << "\n";
    out << "h = " << format_number(p.height) << "\n";
    out << "lambda = " << format_number(p.density) << "\n";
    out << "lambda_u = " << format_number(p.user_density) << "\n";
    out << "psi_half = " << format_number(p.semi_angle_deg) << "\n";
    out << "a_pd = " << format_number(p.pd_area) << "\n";
    out << "xi = " << format_number(p.responsivity) << "\n";
    out << "g_f = " << format_number(p.filter_gain) << "\n";
    out << "g_c = " << format_number(p.concentrator_gain) << "\n";
    out << "ptx = " << format_number(p.tx_power) << "\n";
    out << "n0bf = " << format_number(p.noise_power) << "\n";
    out << "w = " << format_number(p.bandwidth) << "\n";
    out << "zeta1 = " << format_number(p.zeta1) << "\n";
    out << "zeta2 = " << format_number(p.zeta2) << "\n";
    out << "eta = " << format_number(p.reflection_coeff) << "\n";
    out << "k = " << p.max_order << "\n";
    out << "mode = " << (config.mode == SampleMode::MIRRORED ? "mirrored" : "independent")
        << "\n";
    out << "engine = " << engine_name(config.engine) << "\n";
    out << "trials = " << config.trials << "\n";
    out << "seed = " << config.seed << "\n";
    out << "rel_tol = " << format_number(config.quad.rel_tol) << "\n";
    out << "abs_tol = " << format_number(config.quad.abs_tol) << "\n";
    out << "grid_n = " << config.grid_n << "\n";
    if (config.tau_grid) {
        out << "tau = ";
        for (std::size_t i = 0; i < config.tau_grid->size(); ++i)
            out << (i ? ", " : "") << format_number((*config.tau_grid)[i]);
        out << "\n";
    }
    if (config.rho_grid) {
        out << "rho = ";
        for (std::size_t i = 0; i < config.rho_grid->size(); ++i)
            out << (i ? ", " : "") << format_number((*config.rho_grid)[i]);
        out << "\n";
    }
    out << "corollary_taus = ";
    for (std::size_t i = 0; i < config.corollary_taus.size(); ++i)
        out << (i ? ", " : "") << format_number(config.corollary_taus[i]);
    out << "\n";
    out << "out = " << config.output_path << "\n";
    for (const NamedLocation& loc : config.locations) {
        out << "location." << loc.name << " = ";
        if (loc.point)
            out << format_number(loc.point->x) << " " << format_number(loc.point->y);
        else
            out << "typical";
        out << "\n";
    }
    out << "locations = ";
    for (std::size_t i = 0; i < config.locations.size(); ++i)
        out << (i ? ", " : "") << config.locations[i].name;
    out << "\n";
    return out.str();
}

}  // namespace attocell
