#include "ksdist/run_io.hpp"

#include <bit>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ks::io {

std::string schema_line(const std::string& name) {
    return "# schema=" + name;
}

void expect_schema(const std::filesystem::path& file,
                   const std::string& name) {
    std::ifstream in(file);
    std::string first;
    if (!in || !std::getline(in, first))
        throw std::runtime_error("cannot read " + file.string());
    if (first != schema_line(name))
        throw std::runtime_error("schema mismatch in " + file.string() +
                                 ": got '" + first + "', expected '" +
                                 schema_line(name) + "'");
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

struct CsvWriter::Impl {
    std::ofstream out;
    std::size_t columns = 0;
};

CsvWriter::CsvWriter(const std::filesystem::path& file,
                     const std::string& schema,
                     const std::vector<std::string>& columns)
    : impl_(new Impl) {
    impl_->out.open(file);
    if (!impl_->out)
        throw std::runtime_error("cannot open " + file.string());
    impl_->columns = columns.size();
    impl_->out << schema_line(schema) << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        impl_->out << (i ? "," : "") << columns[i];
    impl_->out << "\n";
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(std::span<const double> values) {
    if (values.size() != impl_->columns)
        throw std::logic_error("CsvWriter: wrong column count");
    for (std::size_t i = 0; i < values.size(); ++i)
        impl_->out << (i ? "," : "") << format_double(values[i]);
    impl_->out << "\n";
}

void CsvWriter::raw_row(const std::string& line) { impl_->out << line << "\n"; }

namespace {

void hash_mix(std::uint64_t& h, std::uint64_t v) {
    // FNV-1a, one byte at a time.
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xffu;
        h *= 1099511628211ull;
    }
}

void hash_double(std::uint64_t& h, double v) {
    hash_mix(h, std::bit_cast<std::uint64_t>(v));
}

}  // namespace

std::uint64_t instance_hash(const bandit::BanditInstance& instance) {
    std::uint64_t h = 14695981039346656037ull;
    hash_mix(h, instance.num_arms);
    hash_mix(h, instance.context_dim);
    hash_mix(h, static_cast<std::uint64_t>(instance.power));
    for (double v : instance.weights)
        hash_double(h, v);
    for (double v : instance.contexts)
        hash_double(h, v);
    for (double v : instance.true_probs)
        hash_double(h, v);
    return h;
}

void write_sidecar(const std::filesystem::path& file,
                   const std::string& subcommand,
                   const std::vector<MetaEntry>& entries) {
    nlohmann::ordered_json j;
    j["tool"] = "ksdist";
    j["subcommand"] = subcommand;
    for (const MetaEntry& e : entries) {
        if (e.numeric)
            j[e.key] = nlohmann::json::parse(e.value);
        else
            j[e.key] = e.value;
    }
    std::filesystem::path side = file;
    side += ".meta.json";
    std::ofstream out(side);
    if (!out)
        throw std::runtime_error("cannot open " + side.string());
    out << j.dump(2) << "\n";
}

void write_trace(const std::filesystem::path& file,
                 const bandit::RunTrace& trace) {
    CsvWriter csv(file, kTraceSchema,
                  {"step", "arm", "reward", "inst_regret", "cum_regret"});
    for (const bandit::TraceRow& r : trace.rows) {
        std::ostringstream line;
        line << r.step << ',' << r.arm << ',' << r.reward << ','
             << format_double(r.inst_regret) << ','
             << format_double(r.cum_regret);
        csv.raw_row(line.str());
    }
}

bandit::RunTrace read_trace(const std::filesystem::path& file) {
    expect_schema(file, kTraceSchema);
    std::ifstream in(file);
    std::string line;
    std::getline(in, line);  // schema
    std::getline(in, line);  // header
    if (line != "step,arm,reward,inst_regret,cum_regret")
        throw std::runtime_error("trace header mismatch in " + file.string());
    bandit::RunTrace trace;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        bandit::TraceRow r;
        std::istringstream ls(line);
        char c;
        ls >> r.step >> c >> r.arm >> c >> r.reward >> c >> r.inst_regret >>
            c >> r.cum_regret;
        if (!ls)
            throw std::runtime_error("bad trace row in " + file.string());
        trace.rows.push_back(r);
    }
    return trace;
}

}  // namespace ks::io
