// Proof wire format, version 1. See FORMATS.md for the full grammar.
//
//   "PSME" | version u8 | d_hc u8 | k u64 | d u16 | q u16 | r u8
//   | T_K (32) | C (32) | q x challenge record
//
// Challenge record: len u32, then a step witness followed (when r >= 2) by d
// provenance nodes. Node vertices and observed blocks are not stored; they
// are the parent witness's read openings and are reattached during parsing.

#include <bit>
#include <cstring>

#include "posme/hashing.hpp"
#include "posme/prover.hpp"

namespace posme {
namespace {

constexpr char kMagic[4] = {'P', 'S', 'M', 'E'};
constexpr uint8_t kVersion = 1;

unsigned root_tree_depth(uint64_t k)
{
    return static_cast<unsigned>(std::countr_zero(std::bit_ceil(k + 1)));
}

struct Writer {
    std::vector<uint8_t> buf;

    void u8(uint8_t x) { buf.push_back(x); }
    void u16(uint16_t x)
    {
        buf.push_back(static_cast<uint8_t>(x));
        buf.push_back(static_cast<uint8_t>(x >> 8));
    }
    void u32(uint32_t x)
    {
        for (int i = 0; i < 4; ++i) buf.push_back(static_cast<uint8_t>(x >> (8 * i)));
    }
    void u64(uint64_t x)
    {
        for (int i = 0; i < 8; ++i) buf.push_back(static_cast<uint8_t>(x >> (8 * i)));
    }
    void digest(const Digest& d) { buf.insert(buf.end(), d.bytes.begin(), d.bytes.end()); }
    void block(const Block& b)
    {
        digest(b.data);
        digest(b.causal);
    }
    void siblings(const MerklePath& p)
    {
        u16(static_cast<uint16_t>(p.siblings.size()));
        for (const Digest& s : p.siblings) digest(s);
    }
};

struct Reader {
    std::span<const uint8_t> buf;
    size_t off = 0;

    void need(size_t n) const
    {
        if (buf.size() - off < n) throw ParseError("truncated proof");
    }
    uint8_t u8()
    {
        need(1);
        return buf[off++];
    }
    uint16_t u16()
    {
        need(2);
        uint16_t x = static_cast<uint16_t>(buf[off] | (buf[off + 1] << 8));
        off += 2;
        return x;
    }
    uint32_t u32()
    {
        need(4);
        uint32_t x = 0;
        for (int i = 0; i < 4; ++i) x |= static_cast<uint32_t>(buf[off + i]) << (8 * i);
        off += 4;
        return x;
    }
    uint64_t u64()
    {
        need(8);
        uint64_t x = load_le64(buf.data() + off);
        off += 8;
        return x;
    }
    Digest digest()
    {
        need(32);
        Digest d;
        std::copy_n(buf.data() + off, 32, d.bytes.begin());
        off += 32;
        return d;
    }
    Block block()
    {
        Block b;
        b.data = digest();
        b.causal = digest();
        return b;
    }
};

void write_witness(Writer& w, const StepWitness& sw)
{
    w.digest(sw.t_prev);
    for (const ReadOpening& o : sw.openings) {
        w.u64(o.coord);
        w.block(o.block);
        w.siblings(o.path);
    }
    w.digest(sw.root_pair.r_minus);
    w.siblings(sw.root_pair.path_minus);
    w.digest(sw.root_pair.r_plus);
    w.siblings(sw.root_pair.path_plus);
}

void write_node(Writer& w, const ProvenanceNode& n, unsigned depth, const Params& p)
{
    if (!n.writer) {
        w.u8(0);
        return;
    }
    w.u8(1);
    w.u64(n.writer->step);
    write_witness(w, n.writer->witness);
    if (depth < unsigned{p.recursion_depth} - 1) {
        for (const ProvenanceNode& c : n.writer->children) write_node(w, c, depth + 1, p);
    }
}

MerklePath read_siblings(Reader& r, uint64_t leaf_index, unsigned expected_depth)
{
    MerklePath p;
    p.leaf_index = leaf_index;
    const uint16_t count = r.u16();
    if (count != expected_depth) throw ParseError("unexpected merkle path depth");
    p.siblings.resize(count);
    for (uint16_t i = 0; i < count; ++i) p.siblings[i] = r.digest();
    return p;
}

StepWitness read_witness(Reader& r, const Params& p, uint64_t step_minus, uint64_t step)
{
    const uint64_t n = p.arena_blocks();
    const unsigned lr = root_tree_depth(p.steps);
    StepWitness sw;
    sw.t_prev = r.digest();
    sw.openings.resize(p.reads_per_step + 1);
    for (auto& o : sw.openings) {
        o.coord = r.u64();
        if (o.coord >= n) throw ParseError("opening coordinate out of range");
        o.block = r.block();
        o.path = read_siblings(r, o.coord, p.d_hc);
    }
    sw.root_pair.r_minus = r.digest();
    sw.root_pair.path_minus = read_siblings(r, step_minus, lr);
    sw.root_pair.r_plus = r.digest();
    sw.root_pair.path_plus = read_siblings(r, step, lr);
    return sw;
}

ProvenanceNode read_node(Reader& r, const Params& p, uint64_t vertex, const Block& observed,
                         unsigned depth)
{
    ProvenanceNode node;
    node.vertex = vertex;
    node.observed = observed;
    const uint8_t tag = r.u8();
    if (tag == 0) return node;
    if (tag != 1) throw ParseError("invalid provenance tag");
    WriterStep ws;
    ws.step = r.u64();
    if (ws.step < 1 || ws.step > p.steps) throw ParseError("writer step out of range");
    ws.witness = read_witness(r, p, ws.step - 1, ws.step);
    if (depth < unsigned{p.recursion_depth} - 1) {
        ws.children.reserve(p.reads_per_step);
        for (uint16_t j = 0; j < p.reads_per_step; ++j) {
            ws.children.push_back(read_node(r, p, ws.witness.openings[j].coord,
                                            ws.witness.openings[j].block, depth + 1));
        }
    }
    node.writer = std::move(ws);
    return node;
}

} // namespace

std::vector<uint8_t> serialize_proof(const Proof& proof)
{
    Writer w;
    w.buf.reserve(128 + proof_size_estimate(proof.params) / 8);
    w.buf.insert(w.buf.end(), kMagic, kMagic + 4);
    w.u8(kVersion);
    w.u8(proof.params.d_hc);
    w.u64(proof.params.steps);
    w.u16(proof.params.reads_per_step);
    w.u16(proof.params.challenges);
    w.u8(proof.params.recursion_depth);
    w.digest(proof.t_k);
    w.digest(proof.c);

    // Challenge leaf indices are needed for the root-pair paths; re-derive
    // them the same way the verifier will.
    for (const ChallengeWitness& cw : proof.challenges) {
        Writer body;
        write_witness(body, cw.witness);
        if (proof.params.recursion_depth >= 2) {
            for (const ProvenanceNode& n : cw.provenance) {
                write_node(body, n, 1, proof.params);
            }
        }
        w.u32(static_cast<uint32_t>(body.buf.size()));
        w.buf.insert(w.buf.end(), body.buf.begin(), body.buf.end());
    }
    return std::move(w.buf);
}

Proof deserialize_proof(std::span<const uint8_t> bytes)
{
    std::vector<uint64_t> ignored;
    return deserialize_proof(bytes, ignored);
}

Proof deserialize_proof(std::span<const uint8_t> bytes,
                        std::vector<uint64_t>& challenge_steps_out)
{
    Reader r{bytes};
    r.need(4);
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw ParseError("bad magic");
    r.off = 4;
    if (r.u8() != kVersion) throw ParseError("unsupported proof version");

    Proof proof;
    proof.params.d_hc = r.u8();
    proof.params.steps = r.u64();
    proof.params.reads_per_step = r.u16();
    proof.params.challenges = r.u16();
    proof.params.recursion_depth = r.u8();
    try {
        proof.params.validate(Params::Mode::toy);
    } catch (const Error& e) {
        throw ParseError(std::string("invalid proof parameters: ") + e.what());
    }
    if (proof.params.steps > (uint64_t{1} << 52)) {
        throw ParseError("implausible step count");
    }
    proof.t_k = r.digest();
    proof.c = r.digest();

    // Challenge steps derive from the proof's own commitments; the verifier
    // re-derives independently and any disagreement surfaces there.
    std::vector<uint64_t> challenge_steps;
    if (proof.params.challenges > 0) {
        if (proof.params.steps == 0) throw ParseError("challenges against an empty run");
        challenge_steps = derive_challenges(proof.t_k, proof.c, proof.params.steps,
                                            proof.params.challenges);
    }

    proof.challenges.reserve(proof.params.challenges);
    for (uint16_t i = 0; i < proof.params.challenges; ++i) {
        const uint32_t len = r.u32();
        r.need(len);
        const size_t end = r.off + len;
        ChallengeWitness cw;
        const uint64_t s = challenge_steps[i];
        cw.witness = read_witness(r, proof.params, s - 1, s);
        if (proof.params.recursion_depth >= 2) {
            cw.provenance.reserve(proof.params.reads_per_step);
            for (uint16_t j = 0; j < proof.params.reads_per_step; ++j) {
                cw.provenance.push_back(read_node(r, proof.params,
                                                  cw.witness.openings[j].coord,
                                                  cw.witness.openings[j].block, 1));
            }
        }
        if (r.off != end) throw ParseError("challenge record length mismatch");
        proof.challenges.push_back(std::move(cw));
    }
    if (r.off != bytes.size()) throw ParseError("trailing bytes after proof");
    challenge_steps_out = std::move(challenge_steps);
    return proof;
}

} // namespace posme
