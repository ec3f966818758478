#include "posme/run_io.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "posme/hashing.hpp"

namespace posme {
namespace {

constexpr int kFormatVersion = 1;

void write_file(const std::string& path, const void* data, size_t len)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + path + " for writing");
    f.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
    if (!f) throw Error("write failed: " + path);
}

std::vector<uint8_t> read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary | std::ios::ate);
    if (!f) throw Error("cannot open " + path);
    const auto size = f.tellg();
    f.seekg(0);
    std::vector<uint8_t> buf(static_cast<size_t>(size));
    f.read(reinterpret_cast<char*>(buf.data()), size);
    if (!f) throw Error("read failed: " + path);
    return buf;
}

void write_digests(const std::string& path, const std::vector<Digest>& v)
{
    write_file(path, v.data(), v.size() * 32);
}

std::vector<Digest> read_digests(const std::string& path, uint64_t expected)
{
    auto buf = read_file(path);
    if (buf.size() != expected * 32) {
        throw ParseError(path + ": expected " + std::to_string(expected * 32) +
                         " bytes, got " + std::to_string(buf.size()));
    }
    std::vector<Digest> v(expected);
    for (uint64_t i = 0; i < expected; ++i) {
        std::copy_n(buf.data() + i * 32, 32, v[i].bytes.begin());
    }
    return v;
}

} // namespace

void save_run(const RunLog& log, const std::string& dir)
{
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    nlohmann::json header = {
        {"format_version", kFormatVersion},
        {"d_hc", log.params.d_hc},
        {"steps", log.params.steps},
        {"reads_per_step", log.params.reads_per_step},
        {"seed", to_hex(log.seed)},
        {"lean", log.lean},
        {"final_transcript", to_hex(log.final_transcript())},
    };
    std::ofstream hf(dir + "/run.json", std::ios::trunc);
    if (!hf) throw Error("cannot open " + dir + "/run.json for writing");
    hf << header.dump(2) << "\n";
    if (!hf) throw Error("write failed: " + dir + "/run.json");

    write_digests(dir + "/roots.bin", log.roots);
    write_digests(dir + "/transcripts.bin", log.transcripts);

    if (log.lean) return;

    const uint64_t k = log.params.steps;
    const uint16_t d = log.params.reads_per_step;
    {
        std::vector<uint8_t> buf((d + 1) * 8 * k);
        uint8_t* p = buf.data();
        for (uint64_t t = 0; t < k; ++t) {
            for (uint16_t j = 0; j < d; ++j) {
                store_le64(p, log.read_coords[t * d + j]);
                p += 8;
            }
            store_le64(p, log.write_coords[t]);
            p += 8;
        }
        write_file(dir + "/steps.bin", buf.data(), buf.size());
    }
    {
        std::vector<uint8_t> buf(112 * k);
        uint8_t* p = buf.data();
        for (uint64_t t = 0; t < k; ++t) {
            store_le64(p, t + 1);
            store_le64(p + 8, log.write_coords[t]);
            std::copy_n(log.old_blocks[t].data.bytes.begin(), 32, p + 16);
            std::copy_n(log.old_blocks[t].causal.bytes.begin(), 32, p + 48);
            std::copy_n(log.cursors[t].bytes.begin(), 32, p + 80);
            p += 112;
        }
        write_file(dir + "/writelog.bin", buf.data(), buf.size());
    }
}

RunLog load_run(const std::string& dir)
{
    std::ifstream hf(dir + "/run.json");
    if (!hf) throw Error("cannot open " + dir + "/run.json");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(hf);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(dir + "/run.json: " + e.what());
    }
    if (header.value("format_version", -1) != kFormatVersion) {
        throw ParseError(dir + ": unsupported run format version");
    }

    RunLog log;
    log.params.d_hc = header.at("d_hc").get<uint8_t>();
    log.params.steps = header.at("steps").get<uint64_t>();
    log.params.reads_per_step = header.at("reads_per_step").get<uint16_t>();
    log.seed = digest_from_hex(header.at("seed").get<std::string>());
    log.lean = header.at("lean").get<bool>();
    log.params.validate(Params::Mode::toy);

    const uint64_t k = log.params.steps;
    const uint16_t d = log.params.reads_per_step;
    log.roots = read_digests(dir + "/roots.bin", k + 1);
    log.transcripts = read_digests(dir + "/transcripts.bin", k + 1);

    const Digest recorded =
        digest_from_hex(header.at("final_transcript").get<std::string>());
    if (recorded != log.final_transcript()) {
        throw ParseError(dir + ": final transcript disagrees with transcripts.bin");
    }
    if (log.lean) return log;

    {
        auto buf = read_file(dir + "/steps.bin");
        if (buf.size() != (d + 1) * size_t{8} * k) {
            throw ParseError(dir + "/steps.bin: unexpected size");
        }
        log.read_coords.resize(k * d);
        log.write_coords.resize(k);
        const uint8_t* p = buf.data();
        const uint64_t n = log.params.arena_blocks();
        for (uint64_t t = 0; t < k; ++t) {
            for (uint16_t j = 0; j < d; ++j) {
                log.read_coords[t * d + j] = load_le64(p);
                p += 8;
            }
            log.write_coords[t] = load_le64(p);
            p += 8;
            if (log.write_coords[t] >= n) {
                throw ParseError(dir + "/steps.bin: coordinate out of range");
            }
        }
        for (uint64_t v : log.read_coords) {
            if (v >= n) throw ParseError(dir + "/steps.bin: coordinate out of range");
        }
    }
    {
        auto buf = read_file(dir + "/writelog.bin");
        if (buf.size() != size_t{112} * k) {
            throw ParseError(dir + "/writelog.bin: unexpected size");
        }
        log.old_blocks.resize(k);
        log.cursors.resize(k);
        log.new_blocks.resize(k);
        const uint8_t* p = buf.data();
        for (uint64_t t = 0; t < k; ++t) {
            if (load_le64(p) != t + 1) {
                throw ParseError(dir + "/writelog.bin: step index mismatch");
            }
            if (load_le64(p + 8) != log.write_coords[t]) {
                throw ParseError(dir + "/writelog.bin: write coordinate mismatch");
            }
            std::copy_n(p + 16, 32, log.old_blocks[t].data.bytes.begin());
            std::copy_n(p + 48, 32, log.old_blocks[t].causal.bytes.begin());
            std::copy_n(p + 80, 32, log.cursors[t].bytes.begin());
            log.new_blocks[t].data =
                hashing::bind_data(log.old_blocks[t].data, log.cursors[t],
                                   log.old_blocks[t].causal);
            log.new_blocks[t].causal =
                hashing::bind_causal(log.old_blocks[t].causal, log.cursors[t], t + 1);
            p += 112;
        }
    }
    log.write_index = build_write_index(log.write_coords, log.params.arena_blocks());
    return log;
}

} // namespace posme
