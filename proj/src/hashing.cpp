#include "posme/hashing.hpp"

#include <atomic>
#include <cstring>

#include "posme/blake3.hpp"

namespace posme::hashing {
namespace {

std::atomic<uint64_t> g_hash_calls{0};

// Framed-input assembler. Every H call goes through one of these, so the
// framing lives in exactly one place.
class Frame {
public:
    Frame& label(const char* s)
    {
        append(reinterpret_cast<const uint8_t*>(s), std::strlen(s));
        return *this;
    }
    Frame& digest(const Digest& d)
    {
        append(d.bytes.data(), 32);
        return *this;
    }
    Frame& integer(uint64_t x)
    {
        uint8_t le[8];
        store_le64(le, x);
        append(le, 8);
        return *this;
    }
    Frame& var_bytes(std::span<const uint8_t> b)
    {
        integer(b.size());
        append(b.data(), b.size());
        return *this;
    }

private:
    void append(const uint8_t* p, size_t n)
    {
        if (len_ + n <= sizeof(buf_)) {
            std::memcpy(buf_ + len_, p, n);
            len_ += n;
        } else {
            if (overflow_.empty()) overflow_.assign(buf_, buf_ + len_);
            overflow_.insert(overflow_.end(), p, p + n);
            len_ += n;
        }
    }

    // Fixed buffer covers every protocol framing; overflow_ only engages for
    // long task_id/nonce strings in derive_seed.
    uint8_t buf_[192];
    size_t len_ = 0;
    std::vector<uint8_t> overflow_;

    friend Digest hash_frame(const Frame& f);
};

Digest hash_frame(const Frame& f)
{
    g_hash_calls.fetch_add(1, std::memory_order_relaxed);
    Digest out;
    if (f.overflow_.empty()) {
        blake3::hash(f.buf_, f.len_, out.bytes.data());
    } else {
        blake3::hash(f.overflow_.data(), f.overflow_.size(), out.bytes.data());
    }
    return out;
}

uint64_t first_bits(const Digest& d, unsigned d_hc)
{
    if (d_hc == 0 || d_hc > 63) {
        throw Error("coordinate width must be in [1, 63], got " + std::to_string(d_hc));
    }
    return load_le64(d.bytes.data()) & ((uint64_t{1} << d_hc) - 1);
}

} // namespace

Digest init_data_digest(const Digest& seed, uint64_t i, const std::optional<Digest>& parent)
{
    Frame f;
    f.label("init").digest(seed).integer(i);
    if (parent) f.digest(*parent);
    return hash_frame(f);
}

Digest init_causal_digest(const Digest& seed, uint64_t i, const std::optional<Digest>& parent)
{
    Frame f;
    f.label("causal").digest(seed).integer(i);
    if (parent) f.digest(*parent);
    return hash_frame(f);
}

uint64_t derive_read_coord(const Digest& cursor, uint64_t j, unsigned d_hc)
{
    Frame f;
    f.label("addr").digest(cursor).integer(j);
    return first_bits(hash_frame(f), d_hc);
}

uint64_t derive_write_coord(const Digest& cursor, unsigned d_hc)
{
    Frame f;
    f.label("write").digest(cursor);
    return first_bits(hash_frame(f), d_hc);
}

Digest chain_cursor(const Digest& c, const Digest& d_j, const Digest& h_j)
{
    Frame f;
    f.digest(c).digest(d_j).digest(h_j);
    return hash_frame(f);
}

Digest bind_data(const Digest& old_data, const Digest& c, const Digest& old_causal)
{
    Frame f;
    f.digest(old_data).digest(c).digest(old_causal);
    return hash_frame(f);
}

Digest bind_causal(const Digest& old_causal, const Digest& c, uint64_t t)
{
    Frame f;
    f.digest(old_causal).digest(c).integer(t);
    return hash_frame(f);
}

Digest extend_transcript(const Digest& t_prev, uint64_t t, const Digest& c, const Digest& r_t)
{
    Frame f;
    f.digest(t_prev).integer(t).digest(c).digest(r_t);
    return hash_frame(f);
}

Digest initial_transcript(const Digest& seed, uint64_t n, const Digest& r0)
{
    Frame f;
    f.digest(seed).integer(n).digest(r0);
    return hash_frame(f);
}

Digest derive_seed(std::span<const uint8_t> task_id, std::span<const uint8_t> nonce)
{
    Frame f;
    f.var_bytes(task_id).var_bytes(nonce);
    return hash_frame(f);
}

Digest fiat_shamir_sigma(const Digest& t_k, const Digest& c)
{
    Frame f;
    f.digest(t_k).digest(c);
    return hash_frame(f);
}

uint64_t fiat_shamir_step(const Digest& sigma, uint64_t i, uint64_t k)
{
    if (k == 0) throw Error("fiat_shamir_step requires at least one step");
    Frame f;
    f.digest(sigma).integer(i);
    return (load_le64(hash_frame(f).bytes.data()) % k) + 1;
}

Digest leaf_hash(uint64_t v, const Digest& data, const Digest& causal)
{
    Frame f;
    f.label("leaf").integer(v).digest(data).digest(causal);
    return hash_frame(f);
}

Digest node_hash(const Digest& left, const Digest& right)
{
    Frame f;
    f.label("node").digest(left).digest(right);
    return hash_frame(f);
}

Digest rootleaf_hash(uint64_t t, const Digest& r_t)
{
    Frame f;
    f.label("rootleaf").integer(t).digest(r_t);
    return hash_frame(f);
}

Digest pad_hash(uint64_t index)
{
    Frame f;
    f.label("pad").integer(index);
    return hash_frame(f);
}

uint64_t hash_call_count() { return g_hash_calls.load(std::memory_order_relaxed); }
void reset_hash_call_count() { g_hash_calls.store(0, std::memory_order_relaxed); }

} // namespace posme::hashing
