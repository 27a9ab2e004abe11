#include "absim/manifest.hpp"

#include <ctime>
#include <fstream>
#include <stdexcept>

namespace absim {

std::string utc_timestamp_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string render_manifest(const RunManifest& m) {
    std::string out;
    out += "absim run manifest v1\n";
    out += "mode: " + m.mode + "\n";
    out += "seed: " + std::to_string(m.seed) + "\n";
    out += "code_version: " + m.code_version + "\n";
    out += "status: " + m.status + "\n";
    out += "started_utc: " + m.started_utc + "\n";
    out += "finished_utc: " + (m.finished_utc.empty() ? "-" : m.finished_utc) + "\n";
    out += "config_snapshot: " + m.config_snapshot + "\n";
    if (!m.note.empty()) out += "note: " + m.note + "\n";
    out += "outputs:\n";
    for (const std::string& o : m.outputs) out += "  - " + o + "\n";
    return out;
}

void write_manifest(const std::string& path, const RunManifest& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_manifest: cannot open " + path);
    out << render_manifest(m);
    if (!out) throw std::runtime_error("write_manifest: write failed for " + path);
}

}  // namespace absim
