#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace absim {

/// Run-level provenance record. Written with status "running" before any
/// work starts and rewritten with the final status and timestamps after, so
/// an interrupted run leaves an honest trace.
struct RunManifest {
    std::string mode;
    std::uint64_t seed = 0;
    std::string code_version;
    std::string config_snapshot;  // path of the resolved config copy
    std::string status;           // running | completed | failed
    std::string started_utc;
    std::string finished_utc;
    std::vector<std::string> outputs;
    std::string note;             // failure detail when status == failed
};

std::string render_manifest(const RunManifest& m);
void write_manifest(const std::string& path, const RunManifest& m);

/// ISO-8601 UTC, second resolution.
std::string utc_timestamp_now();

}  // namespace absim
