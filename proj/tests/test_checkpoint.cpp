#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "tcur/checkpoint.hpp"
#include "tcur/report.hpp"
#include "test_util.hpp"

using namespace tcur;
using tcur::testing::random_tensor;

namespace {

ErrorKind decode_error(const std::vector<std::uint8_t>& bytes) {
    try {
        decode_checkpoint(bytes);
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::InvalidArgument;  // sentinel: decoded fine
}

Adapter trained_adapter() {
    Adapter a = init_adapter(random_tensor({5, 6, 3}, 1), 2);
    a.set_core(random_tensor(a.core().dims(), 2));
    return a;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("tcur_test_" + name);
}

}  // namespace

TEST(Checkpoint, HeaderLayout) {
    const Tensor3 t(Dims{1, 2, 1}, {1.0, -2.0});
    const auto bytes = encode_checkpoint({StackGroup::MlpDown, t});
    ASSERT_EQ(bytes.size(), 32u + 24u + 16u + 4u);
    EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "TCUR");
    EXPECT_EQ(bytes[4], 1);   // version
    EXPECT_EQ(bytes[8], 0);   // raw tensor
    EXPECT_EQ(bytes[12], 1);  // slice-major layout
    EXPECT_EQ(bytes[16], 3);  // stack group: down
    EXPECT_EQ(bytes[24], 1);  // one tensor
    EXPECT_EQ(bytes[32], 1);  // n1
    EXPECT_EQ(bytes[40], 2);  // n2
    // 1.0 little-endian: 00 .. 00 f0 3f
    EXPECT_EQ(bytes[56 + 6], 0xf0);
    EXPECT_EQ(bytes[56 + 7], 0x3f);
    // -2.0: sign bit set in the last byte.
    EXPECT_EQ(bytes[64 + 7], 0xc0);
    const std::uint32_t crc = crc32_of(std::span(bytes).first(bytes.size() - 4));
    EXPECT_EQ(bytes[bytes.size() - 4], crc & 0xff);
}

TEST(Checkpoint, Crc32KnownValue) {
    const std::string text = "123456789";
    const std::vector<std::uint8_t> v(text.begin(), text.end());
    EXPECT_EQ(crc32_of(v), 0xCBF43926u);
}

TEST(Checkpoint, RoundTripEveryKind) {
    const Tensor3 w = random_tensor({4, 5, 3}, 3);
    const Adapter a = trained_adapter();
    for (const Checkpoint& c : {Checkpoint{StackGroup::None, w}, Checkpoint{StackGroup::SelfAttention, decompose(w, 3)},
                                Checkpoint{StackGroup::MlpUp, a}}) {
        const auto bytes = encode_checkpoint(c);
        const Checkpoint back = decode_checkpoint(bytes);
        EXPECT_EQ(back.kind(), c.kind());
        EXPECT_EQ(back.group, c.group);
        EXPECT_EQ(encode_checkpoint(back), bytes);
    }
    const Checkpoint fa = decode_checkpoint(encode_checkpoint({StackGroup::None, decompose(w, 2)}));
    const auto& f = std::get<TcurFactors>(fa.payload);
    EXPECT_EQ(f.rows, decompose(w, 2).rows);
    EXPECT_EQ(f.rank, 2u);
    const Checkpoint ad = decode_checkpoint(encode_checkpoint({StackGroup::None, a}));
    EXPECT_EQ(std::get<Adapter>(ad.payload).core(), a.core());
}

TEST(Checkpoint, FileRoundTrip) {
    const auto path = temp_file("roundtrip.ckpt");
    const Checkpoint c{StackGroup::None, trained_adapter()};
    write_checkpoint(path, c);
    EXPECT_EQ(encode_checkpoint(read_checkpoint(path)), encode_checkpoint(c));
    std::filesystem::remove(path);
}

TEST(Checkpoint, DetectsCorruption) {
    const auto bytes = encode_checkpoint({StackGroup::None, decompose(random_tensor({4, 4, 2}, 4), 2)});
    auto truncated = bytes;
    truncated.pop_back();
    EXPECT_EQ(decode_error(truncated), ErrorKind::CorruptCheckpoint);
    EXPECT_EQ(decode_error({bytes.begin(), bytes.begin() + 20}), ErrorKind::CorruptCheckpoint);

    auto payload_flip = bytes;
    payload_flip[bytes.size() - 20] ^= 0x01;
    EXPECT_EQ(decode_error(payload_flip), ErrorKind::CorruptCheckpoint);

    auto magic = bytes;
    magic[0] = 'X';
    EXPECT_EQ(decode_error(magic), ErrorKind::CorruptCheckpoint);

    auto version = bytes;
    version[4] = 9;
    EXPECT_EQ(decode_error(version), ErrorKind::UnsupportedVersion);

    for (std::size_t pos = 0; pos < bytes.size(); ++pos) {
        auto flipped = bytes;
        flipped[pos] ^= 0x80;
        EXPECT_NE(decode_error(flipped), ErrorKind::InvalidArgument) << "flip at byte " << pos << " not detected";
    }
}

TEST(Checkpoint, MissingFile) {
    try {
        read_checkpoint(temp_file("does_not_exist.ckpt"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IoFailure);
    }
}

TEST(Report, JsonAndCsvShape) {
    ComparisonReport rep{42, PlantMode::InSpan, {{"full", 64, 0.0, 1.5, 0, {4, 4, 4}}, {"tcur", 16, 1e-9, 2.0, 2, {4, 4, 4}}}};
    const auto j = to_json(rep);
    EXPECT_EQ(j["seed"], 42);
    EXPECT_EQ(j["plant_mode"], "in_span");
    ASSERT_EQ(j["records"].size(), 2u);
    EXPECT_EQ(j["records"][1]["method"], "tcur");
    EXPECT_EQ(j["records"][1]["params"], 16);
    EXPECT_EQ(j["records"][1]["dims"], nlohmann::json::array({4, 4, 4}));
    const std::string csv = to_csv(rep);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "method,params,final_loss,wall_ms,rank,n1,n2,n3,seed");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(Report, ParamCaveatIsPrinted) {
    const auto j = to_json(count_params({768, 12, 12}, 8));
    EXPECT_EQ(j["total_learnable"], 4608);
    EXPECT_NE(j["caveat"].get<std::string>().find("2.683"), std::string::npos);
    EXPECT_NE(j["caveat"].get<std::string>().find("decoder"), std::string::npos);
}
