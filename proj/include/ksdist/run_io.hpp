#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ksdist/bandit.hpp"

// File interchange: CSV tables with a versioned schema comment on the first
// line, and JSON metadata sidecars that pin down everything needed to
// reproduce a run (subcommand, flags, seed, instance hash).

namespace ks::io {

// First line of every CSV: "# schema=<name>". Readers reject drift.
std::string schema_line(const std::string& name);

// Throws unless the file starts with the expected schema line.
void expect_schema(const std::filesystem::path& file,
                   const std::string& name);

// Deterministic doubles formatting (shortest round-trip form).
std::string format_double(double v);

struct CsvWriter {
    explicit CsvWriter(const std::filesystem::path& file,
                       const std::string& schema,
                       const std::vector<std::string>& columns);
    ~CsvWriter();
    void row(std::span<const double> values);
    void raw_row(const std::string& line);

  private:
    struct Impl;
    Impl* impl_;
};

// FNV-1a over the bit patterns of the instance fields; identifies the
// exact synthetic environment in sidecars and summaries.
std::uint64_t instance_hash(const bandit::BanditInstance& instance);

// Writes `<file>.meta.json` next to `file` with the given key/value pairs
// (values are emitted as JSON strings except when tagged numeric).
struct MetaEntry {
    std::string key;
    std::string value;
    bool numeric = false;
};
void write_sidecar(const std::filesystem::path& file,
                   const std::string& subcommand,
                   const std::vector<MetaEntry>& entries);

// RunTrace <-> CSV (columns: step,arm,reward,inst_regret,cum_regret).
inline constexpr const char* kTraceSchema = "ksdist.bandit.trace.v1";
void write_trace(const std::filesystem::path& file,
                 const bandit::RunTrace& trace);
bandit::RunTrace read_trace(const std::filesystem::path& file);

}  // namespace ks::io
