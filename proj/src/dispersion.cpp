#include "spdc/dispersion.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "spdc/text.hpp"

namespace spdc {

namespace detail {

void report_wavelength_out_of_range(double lambda_m, const DispersionModel& model) {
    throw WavelengthOutOfRange("wavelength " + text::sig(lambda_m * 1e9, 8) + " nm outside [" +
                               text::sig(model.lambda_min_nm, 8) + ", " + text::sig(model.lambda_max_nm, 8) +
                               "] nm of dispersion model '" + model.label + "'");
}

void report_temperature_extrapolation(double temp_c, const DispersionModel& model) {
    warn_once("temperature:" + model.label + ":" + text::exact(temp_c),
              "temperature " + text::sig(temp_c, 6) + " degC outside [" + text::sig(model.temp_min_c, 6) + ", " +
                  text::sig(model.temp_max_c, 6) + "] degC of dispersion model '" + model.label +
                  "'; extrapolating");
}

} // namespace detail

std::string DispersionModel::to_text() const {
    std::ostringstream out;
    out << "label = " << label << '\n';
    out << "A = " << text::exact(sellmeier_A) << '\n';
    for (std::size_t k = 0; k < sellmeier_terms.size(); ++k) {
        out << 'B' << k + 1 << " = " << text::exact(sellmeier_terms[k].strength) << '\n';
        out << 'C' << k + 1 << " = " << text::exact(sellmeier_terms[k].resonance_um2) << '\n';
    }
    out << "D = " << text::exact(sellmeier_D) << '\n';
    for (int m = 0; m < 4; ++m) out << "T1_" << m << " = " << text::exact(thermo_linear[m]) << '\n';
    for (int m = 0; m < 4; ++m) out << "T2_" << m << " = " << text::exact(thermo_quadratic[m]) << '\n';
    out << "lambda_min_nm = " << text::exact(lambda_min_nm) << '\n';
    out << "lambda_max_nm = " << text::exact(lambda_max_nm) << '\n';
    out << "temp_min_c = " << text::exact(temp_min_c) << '\n';
    out << "temp_max_c = " << text::exact(temp_max_c) << '\n';
    return out.str();
}

std::string DispersionModel::digest() const { return text::fnv1a_hex(to_text()); }

namespace {

struct Entry {
    std::string value;
    int line;
};

double number(const std::map<std::string, Entry>& kv, const std::string& key, const std::string& source) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ParseError(source, 0, "missing key '" + key + "'");
    double v = 0.0;
    if (!text::parse_double(it->second.value, v))
        throw ParseError(source, it->second.line, "'" + key + "' is not a number: " + it->second.value);
    return v;
}

bool is_known_key(const std::string& key) {
    static const char* fixed[] = {"label",         "A",             "D",          "T1_0",      "T1_1",
                                  "T1_2",          "T1_3",          "T2_0",       "T2_1",      "T2_2",
                                  "T2_3",          "lambda_min_nm", "lambda_max_nm", "temp_min_c", "temp_max_c"};
    for (const char* k : fixed)
        if (key == k) return true;
    if (key.size() >= 2 && (key[0] == 'B' || key[0] == 'C')) {
        int idx = 0;
        return text::parse_int(std::string_view(key).substr(1), idx) && idx >= 1;
    }
    return false;
}

} // namespace

DispersionModel parse_dispersion(std::istream& in, const std::string& source) {
    std::map<std::string, Entry> kv;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = text::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(source, line_no, "expected 'key = value'");
        std::string key(text::trim(line.substr(0, eq)));
        std::string value(text::trim(line.substr(eq + 1)));
        if (!is_known_key(key)) throw ParseError(source, line_no, "unknown key '" + key + "'");
        if (kv.count(key)) throw ParseError(source, line_no, "duplicate key '" + key + "'");
        kv.emplace(std::move(key), Entry{std::move(value), line_no});
    }

    DispersionModel m;
    if (const auto it = kv.find("label"); it != kv.end()) m.label = it->second.value;
    else throw ParseError(source, 0, "missing key 'label'");
    m.sellmeier_A = number(kv, "A", source);
    m.sellmeier_D = number(kv, "D", source);
    for (int k = 1;; ++k) {
        const std::string b = "B" + std::to_string(k), c = "C" + std::to_string(k);
        const bool has_b = kv.count(b) != 0, has_c = kv.count(c) != 0;
        if (!has_b && !has_c) break;
        if (has_b != has_c) throw ParseError(source, 0, "resonance term " + std::to_string(k) + " needs both " + b + " and " + c);
        m.sellmeier_terms.push_back({number(kv, b, source), number(kv, c, source)});
    }
    std::size_t term_keys = 0;
    for (const auto& [key, _] : kv)
        if (key[0] == 'B' || key[0] == 'C') ++term_keys;
    if (term_keys != 2 * m.sellmeier_terms.size())
        throw ParseError(source, 0, "resonance terms must be numbered contiguously from 1");

    for (int j = 0; j < 4; ++j) {
        m.thermo_linear[j] = number(kv, "T1_" + std::to_string(j), source);
        m.thermo_quadratic[j] = number(kv, "T2_" + std::to_string(j), source);
    }
    m.lambda_min_nm = number(kv, "lambda_min_nm", source);
    m.lambda_max_nm = number(kv, "lambda_max_nm", source);
    m.temp_min_c = number(kv, "temp_min_c", source);
    m.temp_max_c = number(kv, "temp_max_c", source);

    if (!(m.lambda_min_nm > 0 && m.lambda_min_nm < m.lambda_max_nm))
        throw ParseError(source, 0, "need 0 < lambda_min_nm < lambda_max_nm");
    if (!(m.temp_min_c <= m.temp_max_c)) throw ParseError(source, 0, "need temp_min_c <= temp_max_c");

    // The index must be real and above 1 across the validity window.
    constexpr int samples = 512;
    for (int i = 0; i <= samples; ++i) {
        const double l_um = 1e-3 * (m.lambda_min_nm + (m.lambda_max_nm - m.lambda_min_nm) * i / samples);
        for (const double t : {m.temp_min_c, m.temp_max_c}) {
            const double n = sellmeier_index(l_um, m) + thermo_optic_shift(l_um, t, m);
            if (!(std::isfinite(n) && n > 1.0))
                throw ParseError(source, 0, "index not real and > 1 at " + text::sig(l_um * 1e3, 6) + " nm");
        }
    }
    return m;
}

DispersionModel load_dispersion(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open dispersion file");
    return parse_dispersion(in, path);
}

void CrystalSpec::validate() const {
    if (!(length_L0 > 0)) throw ValidationError("crystal.length", "must be > 0");
    if (!(poling_G0 > 0)) throw ValidationError("crystal.poling", "must be > 0");
    if (!std::isfinite(alpha)) throw ValidationError("crystal.alpha", "must be finite");
    if (!std::isfinite(beta)) throw ValidationError("crystal.beta", "must be finite");
    if (!dispersion) throw ValidationError("crystal.dispersion", "no dispersion model");
}

} // namespace spdc
