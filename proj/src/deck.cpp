#include "tpic/deck.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

namespace tpic {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

bool to_double(std::string_view v, double& out) {
    const char* b = v.data();
    const char* e = b + v.size();
    auto r = std::from_chars(b, e, out);
    return r.ec == std::errc{} && r.ptr == e;
}

bool to_i64(std::string_view v, std::int64_t& out) {
    const char* b = v.data();
    const char* e = b + v.size();
    auto r = std::from_chars(b, e, out);
    return r.ec == std::errc{} && r.ptr == e;
}

bool to_u64(std::string_view v, std::uint64_t& out) {
    const char* b = v.data();
    const char* e = b + v.size();
    auto r = std::from_chars(b, e, out);
    return r.ec == std::errc{} && r.ptr == e;
}

bool to_bool(std::string_view v, bool& out) {
    if (v == "true") {
        out = true;
        return true;
    }
    if (v == "false") {
        out = false;
        return true;
    }
    return false;
}

enum class Section { none, simulation, tiles, species, diagnostics, features };

double need_double(int line, std::string_view key, std::string_view v) {
    double d;
    if (!to_double(v, d)) {
        throw DeckError(line, "bad number for " + std::string(key) + ": '" + std::string(v) + "'");
    }
    return d;
}

int need_int(int line, std::string_view key, std::string_view v) {
    std::int64_t i;
    if (!to_i64(v, i) || i < INT32_MIN || i > INT32_MAX) {
        throw DeckError(line, "bad integer for " + std::string(key) + ": '" + std::string(v) + "'");
    }
    return static_cast<int>(i);
}

std::int64_t need_i64(int line, std::string_view key, std::string_view v) {
    std::int64_t i;
    if (!to_i64(v, i)) {
        throw DeckError(line, "bad integer for " + std::string(key) + ": '" + std::string(v) + "'");
    }
    return i;
}

bool need_bool(int line, std::string_view key, std::string_view v) {
    bool b;
    if (!to_bool(v, b)) {
        throw DeckError(line, "bad boolean for " + std::string(key) + ": '" + std::string(v) +
                                  "' (use true or false)");
    }
    return b;
}

void parse_fields_list(int line, std::string_view v, Diagnostics& d) {
    d.b_mag = d.bz = d.charge = d.energy = false;
    if (trim(v) == "none") return;
    std::size_t pos = 0;
    while (pos <= v.size()) {
        const std::size_t comma = v.find(',', pos);
        const std::string_view item =
            trim(v.substr(pos, comma == std::string_view::npos ? std::string_view::npos
                                                               : comma - pos));
        if (item == "b_mag") d.b_mag = true;
        else if (item == "bz") d.bz = true;
        else if (item == "charge") d.charge = true;
        else if (item == "energy") d.energy = true;
        else throw DeckError(line, "unknown report name '" + std::string(item) + "'");
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
}

}  // namespace

SimConfig parse_deck(std::string_view text) {
    SimConfig cfg;
    Section sec = Section::none;
    SpeciesSpec* sp = nullptr;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++line_no;
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw DeckError(line_no, "unterminated section header");
            const std::string_view head = trim(line.substr(1, line.size() - 2));
            if (head == "simulation") {
                sec = Section::simulation;
            } else if (head == "tiles") {
                sec = Section::tiles;
            } else if (head == "diagnostics") {
                sec = Section::diagnostics;
            } else if (head == "features") {
                sec = Section::features;
            } else if (head.substr(0, 7) == "species") {
                std::string_view rest = trim(head.substr(7));
                if (rest.size() < 2 || rest.front() != '"' || rest.back() != '"') {
                    throw DeckError(line_no, "species section needs a quoted name");
                }
                const std::string_view name = rest.substr(1, rest.size() - 2);
                if (name.empty()) throw DeckError(line_no, "species name must not be empty");
                for (const auto& existing : cfg.species) {
                    if (existing.name == name) {
                        throw DeckError(line_no,
                                        "duplicate species \"" + std::string(name) + "\"");
                    }
                }
                SpeciesSpec s;
                s.name = std::string(name);
                s.density = 1.0;
                cfg.species.push_back(std::move(s));
                sp = &cfg.species.back();
                sec = Section::species;
            } else {
                throw DeckError(line_no, "unknown section [" + std::string(head) + "]");
            }
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw DeckError(line_no, "expected key = value");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view val = trim(line.substr(eq + 1));
        if (key.empty()) throw DeckError(line_no, "empty key");
        if (val.empty()) throw DeckError(line_no, "empty value for " + std::string(key));

        switch (sec) {
            case Section::none:
                throw DeckError(line_no, "key outside any section");
            case Section::simulation:
                if (key == "nx") cfg.nx = need_int(line_no, key, val);
                else if (key == "ny") cfg.ny = need_int(line_no, key, val);
                else if (key == "dx") cfg.dx = need_double(line_no, key, val);
                else if (key == "dy") cfg.dy = need_double(line_no, key, val);
                else if (key == "dt") cfg.dt = need_double(line_no, key, val);
                else if (key == "n_steps") cfg.n_steps = need_i64(line_no, key, val);
                else if (key == "seed") {
                    std::uint64_t s;
                    if (!to_u64(val, s)) {
                        throw DeckError(line_no, "bad seed '" + std::string(val) + "'");
                    }
                    cfg.seed = s;
                } else {
                    throw DeckError(line_no, "unknown [simulation] key '" + std::string(key) + "'");
                }
                break;
            case Section::tiles:
                if (key == "tile_nx") cfg.tile_nx = need_int(line_no, key, val);
                else if (key == "tile_ny") cfg.tile_ny = need_int(line_no, key, val);
                else if (key == "guard") cfg.guard = need_int(line_no, key, val);
                else throw DeckError(line_no, "unknown [tiles] key '" + std::string(key) + "'");
                break;
            case Section::species:
                if (key == "m_over_q") sp->m_over_q = need_double(line_no, key, val);
                else if (key == "ppc_x") sp->ppc.x = need_int(line_no, key, val);
                else if (key == "ppc_y") sp->ppc.y = need_int(line_no, key, val);
                else if (key == "ufl_x") sp->u_fl.x = need_double(line_no, key, val);
                else if (key == "ufl_y") sp->u_fl.y = need_double(line_no, key, val);
                else if (key == "ufl_z") sp->u_fl.z = need_double(line_no, key, val);
                else if (key == "uth_x") sp->u_th.x = need_double(line_no, key, val);
                else if (key == "uth_y") sp->u_th.y = need_double(line_no, key, val);
                else if (key == "uth_z") sp->u_th.z = need_double(line_no, key, val);
                else if (key == "density") sp->density = need_double(line_no, key, val);
                else throw DeckError(line_no, "unknown species key '" + std::string(key) + "'");
                break;
            case Section::diagnostics:
                if (key == "report_every") cfg.diag.report_every = need_i64(line_no, key, val);
                else if (key == "fields") parse_fields_list(line_no, val, cfg.diag);
                else {
                    throw DeckError(line_no,
                                    "unknown [diagnostics] key '" + std::string(key) + "'");
                }
                break;
            case Section::features:
                if (key == "filter_passes") cfg.filter_passes = need_int(line_no, key, val);
                else if (key == "moving_window") cfg.moving_window = need_bool(line_no, key, val);
                else throw DeckError(line_no, "unknown [features] key '" + std::string(key) + "'");
                break;
        }
    }
    return cfg;
}

SimConfig load_deck(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open deck file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw std::runtime_error("cannot read deck file: " + path);
    return parse_deck(text);
}

namespace {

std::string fmt(double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

std::string fmt(std::int64_t v) { return std::to_string(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }

}  // namespace

std::string serialize_deck(const SimConfig& cfg) {
    std::string out;
    out += "[simulation]\n";
    out += "nx = " + fmt(cfg.nx) + "\n";
    out += "ny = " + fmt(cfg.ny) + "\n";
    out += "dx = " + fmt(cfg.dx) + "\n";
    out += "dy = " + fmt(cfg.dy) + "\n";
    out += "dt = " + fmt(cfg.dt) + "\n";
    out += "n_steps = " + fmt(cfg.n_steps) + "\n";
    out += "seed = " + fmt(cfg.seed) + "\n";
    out += "\n[tiles]\n";
    out += "tile_nx = " + fmt(cfg.tile_nx) + "\n";
    out += "tile_ny = " + fmt(cfg.tile_ny) + "\n";
    out += "guard = " + fmt(cfg.guard) + "\n";
    for (const auto& sp : cfg.species) {
        out += "\n[species \"" + sp.name + "\"]\n";
        out += "m_over_q = " + fmt(sp.m_over_q) + "\n";
        out += "ppc_x = " + fmt(sp.ppc.x) + "\n";
        out += "ppc_y = " + fmt(sp.ppc.y) + "\n";
        out += "ufl_x = " + fmt(sp.u_fl.x) + "\n";
        out += "ufl_y = " + fmt(sp.u_fl.y) + "\n";
        out += "ufl_z = " + fmt(sp.u_fl.z) + "\n";
        out += "uth_x = " + fmt(sp.u_th.x) + "\n";
        out += "uth_y = " + fmt(sp.u_th.y) + "\n";
        out += "uth_z = " + fmt(sp.u_th.z) + "\n";
        out += "density = " + fmt(sp.density) + "\n";
    }
    out += "\n[diagnostics]\n";
    out += "report_every = " + fmt(cfg.diag.report_every) + "\n";
    std::string fields;
    for (const auto& [on, name] :
         {std::pair{cfg.diag.b_mag, "b_mag"}, {cfg.diag.bz, "bz"}, {cfg.diag.charge, "charge"},
          {cfg.diag.energy, "energy"}}) {
        if (on) {
            if (!fields.empty()) fields += ", ";
            fields += name;
        }
    }
    out += "fields = " + (fields.empty() ? std::string("none") : fields) + "\n";
    out += "\n[features]\n";
    out += "filter_passes = " + fmt(cfg.filter_passes) + "\n";
    out += std::string("moving_window = ") + (cfg.moving_window ? "true" : "false") + "\n";
    return out;
}

namespace {

int tile_edge(int n) {
    for (int d = 25; d >= 2; --d) {
        if (n % d == 0) return d;
    }
    return n;
}

}  // namespace

SimConfig preset(std::string_view name, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("preset: scale must be positive");
    const int n = static_cast<int>(std::lround(500.0 * scale));
    if (n < 2) throw std::invalid_argument("preset: scale leaves fewer than two cells");

    SimConfig c;
    c.nx = c.ny = n;
    c.dx = c.dy = 0.1;
    c.dt = 0.07;
    c.n_steps = 500;
    c.seed = 1234;
    c.tile_nx = c.tile_ny = tile_edge(n);
    c.guard = 3;

    SpeciesSpec e;
    e.name = "electrons";
    e.m_over_q = -1.0;
    e.ppc = {10, 10};
    e.density = 1.0;

    if (name == "cold") {
        c.species = {e};
    } else if (name == "warm") {
        e.u_th = {1.0, 1.0, 1.0};
        c.species = {e};
    } else if (name == "weibel") {
        e.u_fl = {0.0, 0.0, 0.6};
        e.u_th = {0.1, 0.1, 0.1};
        SpeciesSpec p = e;
        p.name = "positrons";
        p.m_over_q = 1.0;
        p.u_fl = {0.0, 0.0, -0.6};
        c.species = {e, p};
    } else {
        throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
    }
    return c;
}

std::vector<std::string> preset_names() { return {"cold", "warm", "weibel"}; }

}  // namespace tpic
