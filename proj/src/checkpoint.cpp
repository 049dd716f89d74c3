#include "tcur/checkpoint.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

namespace tcur {

std::string_view to_string(PayloadKind k) {
    switch (k) {
        case PayloadKind::RawTensor: return "raw_tensor";
        case PayloadKind::TcurFactors: return "tcur_factors";
        case PayloadKind::Adapter: return "adapter";
    }
    return "unknown";
}

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    std::size_t offset = 0;
    while (offset < bytes.size()) {
        const auto chunk = uInt(std::min<std::size_t>(bytes.size() - offset, std::numeric_limits<uInt>::max()));
        crc = crc32(crc, bytes.data() + offset, chunk);
        offset += chunk;
    }
    return std::uint32_t(crc);
}

namespace {

constexpr std::uint8_t kMagic[4] = {'T', 'C', 'U', 'R'};
constexpr std::size_t kHeaderSize = 32;

class Writer {
public:
    void u32(std::uint32_t v) {
        for (int b = 0; b < 4; ++b) out.push_back(std::uint8_t(v >> (8 * b)));
    }
    void u64(std::uint64_t v) {
        for (int b = 0; b < 8; ++b) out.push_back(std::uint8_t(v >> (8 * b)));
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

    std::vector<std::uint8_t> out;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int b = 0; b < 4; ++b) v |= std::uint32_t(bytes_[pos_ + b]) << (8 * b);
        pos_ += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int b = 0; b < 8; ++b) v |= std::uint64_t(bytes_[pos_ + b]) << (8 * b);
        pos_ += 8;
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    void need(std::size_t n) const {
        if (remaining() < n) throw Error(ErrorKind::CorruptCheckpoint, "unexpected end of checkpoint");
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

struct Contents {
    std::vector<const Tensor3*> tensors;
    std::vector<const IndexSet*> index_sets;
    std::uint32_t rank = 0;
};

Contents contents_of(const Checkpoint& ckpt) {
    Contents c;
    if (const auto* t = std::get_if<Tensor3>(&ckpt.payload)) {
        c.tensors = {t};
    } else if (const auto* f = std::get_if<TcurFactors>(&ckpt.payload)) {
        c.tensors = {&f->C, &f->core, &f->R};
        c.index_sets = {&f->rows, &f->columns};
        c.rank = std::uint32_t(f->rank);
    } else {
        const auto& a = std::get<Adapter>(ckpt.payload);
        c.tensors = {&a.base(), &a.C(), &a.R(), &a.core()};
        c.rank = std::uint32_t(a.rank());
    }
    return c;
}

std::size_t expected_tensors(PayloadKind kind) {
    switch (kind) {
        case PayloadKind::RawTensor: return 1;
        case PayloadKind::TcurFactors: return 3;
        case PayloadKind::Adapter: return 4;
    }
    return 0;
}

[[noreturn]] void corrupt(const std::string& why) { throw Error(ErrorKind::CorruptCheckpoint, why); }

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt) {
    const Contents c = contents_of(ckpt);
    Writer w;
    w.out.insert(w.out.end(), std::begin(kMagic), std::end(kMagic));
    w.u32(kCheckpointVersion);
    w.u32(std::uint32_t(ckpt.kind()));
    w.u32(kSliceMajorLayout);
    w.u32(std::uint32_t(ckpt.group));
    w.u32(c.rank);
    w.u32(std::uint32_t(c.tensors.size()));
    w.u32(std::uint32_t(c.index_sets.size()));
    for (const Tensor3* t : c.tensors) {
        w.u64(t->n1());
        w.u64(t->n2());
        w.u64(t->n3());
    }
    for (const IndexSet* s : c.index_sets) {
        w.u64(s->size());
        for (std::size_t idx : s->indices()) w.u64(idx);
    }
    for (const Tensor3* t : c.tensors) {
        for (double v : t->data()) w.f64(v);
    }
    w.u32(crc32_of(w.out));
    return std::move(w.out);
}

Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kHeaderSize + 4) corrupt("file too short for a header");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) corrupt("bad magic");
    Reader r(bytes.subspan(4, bytes.size() - 8));
    const std::uint32_t version = r.u32();
    if (version != kCheckpointVersion) {
        throw Error(ErrorKind::UnsupportedVersion, "checkpoint version " + std::to_string(version));
    }

    const auto body = bytes.first(bytes.size() - 4);
    Reader trailer(bytes.last(4));
    if (trailer.u32() != crc32_of(body)) corrupt("checksum mismatch");

    const std::uint32_t kind_raw = r.u32();
    if (kind_raw > std::uint32_t(PayloadKind::Adapter)) corrupt("unknown payload kind " + std::to_string(kind_raw));
    const auto kind = PayloadKind(kind_raw);
    if (r.u32() != kSliceMajorLayout) corrupt("unknown data layout");
    const std::uint32_t group_raw = r.u32();
    if (group_raw > std::uint32_t(StackGroup::MlpDown)) corrupt("unknown stack group");
    const std::uint32_t rank = r.u32();
    const std::uint32_t n_tensors = r.u32();
    const std::uint32_t n_sets = r.u32();
    if (n_tensors != expected_tensors(kind)) corrupt("wrong tensor count for payload kind");
    if (n_sets != (kind == PayloadKind::TcurFactors ? 2u : 0u)) corrupt("wrong index-set count for payload kind");

    std::vector<Dims> dims(n_tensors);
    std::size_t total_values = 0;
    for (Dims& d : dims) {
        const std::uint64_t n1 = r.u64(), n2 = r.u64(), n3 = r.u64();
        if (n1 == 0 || n2 == 0 || n3 == 0) corrupt("zero tensor dimension");
        const std::uint64_t limit = r.remaining() / 8;
        if (n1 > limit || n2 > limit || n3 > limit || n1 * n2 > limit || n1 * n2 * n3 > limit) {
            corrupt("declared dims exceed file size");
        }
        d = Dims{n1, n2, n3};
        total_values += d.numel();
    }
    std::vector<std::vector<std::size_t>> sets(n_sets);
    for (auto& s : sets) {
        const std::uint64_t len = r.u64();
        if (len > r.remaining() / 8) corrupt("index set longer than file");
        s.resize(len);
        for (auto& idx : s) idx = r.u64();
    }
    if (r.remaining() != total_values * 8) corrupt("payload length does not match declared dims");

    std::vector<Tensor3> tensors;
    for (const Dims& d : dims) {
        std::vector<double> values(d.numel());
        for (double& v : values) v = r.f64();
        tensors.emplace_back(d, std::move(values));
    }

    Checkpoint ckpt;
    ckpt.group = StackGroup(group_raw);
    try {
        switch (kind) {
            case PayloadKind::RawTensor:
                ckpt.payload = std::move(tensors[0]);
                break;
            case PayloadKind::TcurFactors: {
                const Dims c = tensors[0].dims(), u = tensors[1].dims(), rr = tensors[2].dims();
                if (c.n2 != rank || u != Dims{rank, rank, c.n3} || rr.n1 != rank || rr.n3 != c.n3) {
                    corrupt("factor dims inconsistent with rank");
                }
                if (sets[0].size() != rank || sets[1].size() != rank) corrupt("index set size differs from rank");
                TcurFactors f{std::move(tensors[0]), std::move(tensors[1]), std::move(tensors[2]),
                              IndexSet(std::move(sets[0]), c.n1), IndexSet(std::move(sets[1]), rr.n2), rank};
                ckpt.payload = std::move(f);
                break;
            }
            case PayloadKind::Adapter:
                if (tensors[1].n2() != rank) corrupt("adapter rank does not match C");
                ckpt.payload = Adapter::restore(std::move(tensors[0]), std::move(tensors[1]), std::move(tensors[2]),
                                                std::move(tensors[3]));
                break;
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::CorruptCheckpoint) throw;
        corrupt(e.what());
    }
    return ckpt;
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
    const std::vector<std::uint8_t> bytes = encode_checkpoint(ckpt);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw Error(ErrorKind::IoFailure, "short write to " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Error(ErrorKind::IoFailure, "read error on " + path.string());
    return decode_checkpoint(bytes);
}

}  // namespace tcur
