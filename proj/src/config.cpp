#include "preypred/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "preypred/errors.hpp"
#include "preypred/io.hpp"

namespace preypred {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_exact(const std::string& token, int line_no) {
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ValidationError("config line " + std::to_string(line_no) +
                              ": not a decimal number: '" + token + "'");
    return v;
}

} // namespace

ModelParams load_params(std::istream& in) {
    ModelParams p;
    std::map<std::string, double> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        static const char* known[] = {"r", "K", "a", "eps", "omega", "m", "m_a0", "m_b0", "m_rate"};
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok)
            throw ValidationError("config line " + std::to_string(line_no) + ": unknown key '" +
                                  key + "'");
        if (seen.count(key))
            throw ValidationError("config line " + std::to_string(line_no) + ": duplicate key '" +
                                  key + "'");
        seen[key] = parse_exact(val, line_no);
    }

    if (seen.count("r")) p.r = seen["r"];
    if (seen.count("K")) p.K = seen["K"];
    if (seen.count("a")) p.a = seen["a"];
    if (seen.count("eps")) p.eps = seen["eps"];
    if (seen.count("omega")) p.omega = seen["omega"];

    const bool has_const = seen.count("m") > 0;
    const bool has_cos = seen.count("m_a0") || seen.count("m_b0") || seen.count("m_rate");
    if (has_const && has_cos)
        throw ValidationError("config: 'm' conflicts with the cosine keys m_a0/m_b0/m_rate");
    if (has_cos) {
        if (!(seen.count("m_a0") && seen.count("m_b0") && seen.count("m_rate")))
            throw ValidationError("config: cosine mortality needs all of m_a0, m_b0, m_rate");
        p.mortality = MortalitySchedule::cosine(seen["m_a0"], seen["m_b0"], seen["m_rate"]);
    } else if (has_const) {
        p.mortality = MortalitySchedule::constant(seen["m"]);
    }

    p.validate();
    return p;
}

ModelParams load_params_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    try {
        return load_params(in);
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

void save_params(const ModelParams& p, std::ostream& out) {
    out << "r = " << format_g17(p.r) << "\n";
    out << "K = " << format_g17(p.K) << "\n";
    out << "a = " << format_g17(p.a) << "\n";
    out << "eps = " << format_g17(p.eps) << "\n";
    out << "omega = " << format_g17(p.omega) << "\n";
    if (p.mortality.is_constant()) {
        out << "m = " << format_g17(p.mortality.constant_value()) << "\n";
    } else {
        out << "m_a0 = " << format_g17(p.mortality.a0()) << "\n";
        out << "m_b0 = " << format_g17(p.mortality.b0()) << "\n";
        out << "m_rate = " << format_g17(p.mortality.rate()) << "\n";
    }
}

} // namespace preypred
