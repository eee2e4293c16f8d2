#include "paramguide/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "paramguide/errors.hpp"

namespace paramguide {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + where + (where.empty() ? "" : ".") + it.key() + "'");
}

double number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError("missing key '" + where + "." + key + "'");
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError("'" + where + "." + key + "' must be a number");
    return v.get<double>();
}

double number_or(const json& j, const std::string& key, const std::string& where, double dflt) {
    return j.contains(key) ? number(j, key, where) : dflt;
}

ModeParams read_mode(const json& j, const std::string& where, ModeLabel label) {
    only_keys(j, where, {"group_velocity_cm_s", "field_loss_per_cm", "wavelength_nm", "frequency_thz"});
    ModeParams m;
    m.label = label;
    m.group_velocity = number(j, "group_velocity_cm_s", where);
    m.field_loss = number_or(j, "field_loss_per_cm", where, 0.0);
    bool has_wl = j.contains("wavelength_nm"), has_f = j.contains("frequency_thz");
    if (has_wl == has_f)
        throw ConfigError(where + ": give exactly one of wavelength_nm or frequency_thz");
    if (has_wl) {
        double wl = number(j, "wavelength_nm", where);
        if (!(wl > 0.0)) throw ConfigError(where + ".wavelength_nm must be positive");
        m.omega = units::nm_to_rad(wl);
    } else {
        m.omega = units::thz_to_rad(number(j, "frequency_thz", where));
    }
    return m;
}

} // namespace

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

LoadedConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON config: ") + e.what());
    }
    only_keys(doc, "", {"modes", "coupling", "device", "qpump"});
    LoadedConfig out;
    DeviceConfig& c = out.device;

    if (!doc.contains("modes")) throw ConfigError("missing key 'modes'");
    const json& modes = doc["modes"];
    only_keys(modes, "modes", {"te", "tm", "pump"});
    for (const char* k : {"te", "tm", "pump"})
        if (!modes.contains(k)) throw ConfigError(std::string("missing key 'modes.") + k + "'");
    c.te = read_mode(modes["te"], "modes.te", ModeLabel::TE);
    c.tm = read_mode(modes["tm"], "modes.tm", ModeLabel::TM);
    c.pump = read_mode(modes["pump"], "modes.pump", ModeLabel::Pump);

    if (doc.contains("coupling")) {
        const json& cp = doc["coupling"];
        only_keys(cp, "coupling", {"g_per_cm", "overlap_A", "phase_rad", "G_sqrt_s_per_cm"});
        c.coupling_phase = number_or(cp, "phase_rad", "coupling", 0.0);
        if (cp.contains("g_per_cm")) {
            c.coupling_g = number(cp, "g_per_cm", "coupling");
        } else if (cp.contains("overlap_A")) {
            double A = number(cp, "overlap_A", "coupling");
            if (A < 0.0) throw ConfigError("coupling.overlap_A must be >= 0 (phase is separate)");
            c.coupling_g = std::abs(derive_g(A, c.te, c.tm));
        }
        c.coupling_G = number_or(cp, "G_sqrt_s_per_cm", "coupling", 0.0);
    }

    if (!doc.contains("device")) throw ConfigError("missing key 'device'");
    const json& dv = doc["device"];
    only_keys(dv, "device", {"length_cm", "dk_per_cm", "temperature_mev"});
    c.length = number(dv, "length_cm", "device");
    c.dk = number_or(dv, "dk_per_cm", "device", 0.0);
    c.temperature = units::mev_to_erg(number_or(dv, "temperature_mev", "device", 0.0));

    if (doc.contains("qpump")) {
        const json& q = doc["qpump"];
        only_keys(q, "qpump", {"band_width_thz", "bands"});
        QpumpSettings s;
        s.band_width = units::thz_to_rad(number(q, "band_width_thz", "qpump"));
        if (q.contains("bands")) {
            if (!q["bands"].is_number_integer()) throw ConfigError("qpump.bands must be an integer");
            s.bands = q["bands"].get<int>();
        }
        if (!(s.band_width > 0.0) || s.bands < 1)
            throw ConfigError("qpump: band width must be positive and bands >= 1");
        out.qpump = s;
    }

    try {
        c.validate();
    } catch (const InvalidParameterError& e) {
        throw ConfigError(std::string("out-of-range parameter: ") + e.what());
    }
    out.canonical = doc.dump();
    out.hash = sha256_hex(out.canonical);
    return out;
}

LoadedConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace paramguide
