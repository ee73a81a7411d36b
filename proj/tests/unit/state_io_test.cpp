#include <gtest/gtest.h>

#include <string>

#include "tangleroof/error.hpp"
#include "tangleroof/state_io.hpp"

namespace tangleroof {
namespace {

ErrorCode code_of(const std::string& text) {
    try {
        parse_state(text);
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::invalid_argument;
}

std::string message_of(const std::string& text) {
    try {
        parse_state(text);
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

TEST(StateIo, RoundTrip) {
    const PureState s = make_w(3);
    const PureState back = state_from_json(state_to_json(s));
    EXPECT_LT((back.amplitudes() - s.amplitudes()).norm(), 1e-15);
}

TEST(StateIo, ParsesComplexPairs) {
    const PureState s = parse_state(R"({"n": 1, "amplitudes": [[0.6, 0], [0, 0.8]]})");
    EXPECT_EQ(s[1], Complex(0.0, 0.8));
}

TEST(StateIo, ErrorsNameTheField) {
    EXPECT_EQ(code_of("{"), ErrorCode::parse_error);
    EXPECT_NE(message_of(R"({"amplitudes": []})").find("'n'"), std::string::npos);
    EXPECT_NE(message_of(R"({"n": 2, "amplitudes": [[1, 0]]})").find("'amplitudes'"), std::string::npos);
    EXPECT_NE(message_of(R"({"n": 1, "amplitudes": [[1, 0], [0]]})").find("amplitudes[1]"), std::string::npos);
    EXPECT_EQ(code_of(R"({"n": 1, "amplitudes": [[1, 0], "x"]})"), ErrorCode::parse_error);
}

TEST(StateIo, WarnsOrRenormalizes) {
    const std::string text = R"({"n": 1, "amplitudes": [[1, 0], [1, 0]]})";
    std::string warned;
    StateParseOptions opts;
    opts.warn = [&](const std::string& m) { warned = m; };
    const PureState raw = parse_state(text, opts);
    EXPECT_FALSE(warned.empty());
    EXPECT_NEAR(raw.norm_squared(), 2.0, 1e-15);
    opts.renormalize = true;
    EXPECT_NEAR(parse_state(text, opts).norm_squared(), 1.0, 1e-15);
}

TEST(StateIo, MissingFile) {
    try {
        load_state("/nonexistent/state.json");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::parse_error);
    }
}

}  // namespace
}  // namespace tangleroof
