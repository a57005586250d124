#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kpplab/config.hpp"

// Batch execution: one directory per run.  config.json goes down first, data
// artifacts next, run_record.json last, so a directory with a config but no
// record is a partial run.  Gating validators run before any solve; a config
// whose medium fails them produces no data artifact at all.

namespace kpplab {

struct RunRecord {
    int schema_version = 1;
    std::string kind;
    std::string config_hash;  // 16 hex digits
    std::uint64_t seed = 0;
    std::string out_dir;
    bool ok = false;
    std::vector<std::string> artifacts;  // file names in emission order
    std::vector<std::pair<std::string, std::string>> artifact_hash;  // name -> fnv64 hex
    std::vector<std::pair<std::string, std::string>> summary;        // metric -> value
    // bookkeeping only, not part of the run identity (data artifacts stay
    // byte-identical across reruns; the record carries the timing)
    double started_unix = 0.0;
    double finished_unix = 0.0;
    double wall_seconds = 0.0;
};

RunRecord run(const RunConfig& c);

// $KPPLAB_OUT, or "runs" when unset.
std::string output_root();

// Directory a config will write into (c.out, or root/<kind>-<hash8>).
std::string run_directory(const RunConfig& c);

// Machine-readable failure report for tooling; written by the CLI on error.
void write_error_file(const std::string& dir, const std::string& type, const std::string& message);

struct RegistryEntry {
    std::string dir;
    bool complete = false;
    bool partial = false;
    std::string note;  // reason when partial
    RunRecord record;  // filled when complete
};

// Scans the children of root; unreadable entries are flagged, never fatal.
std::vector<RegistryEntry> registry_list(const std::string& root);

}  // namespace kpplab
