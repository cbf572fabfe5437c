#include <gtest/gtest.h>

#include "ldtt/driver.hpp"
#include "linearity_gen.hpp"

namespace ldtt {
namespace {

bool accepted(const std::string& src) {
    const SourceReport r = check_source(src);
    return !r.front_error && r.decls.size() == 1 && r.decls[0].report.accepted;
}

TEST(Linearity, GeneratedTermsFollowUsageCounts) {
    LinGen gen(7);
    int positives = 0;
    for (int i = 0; i < 600; ++i) {
        const LinCase c = gen.next();
        const auto r = check_source(c.source());
        ASSERT_FALSE(r.front_error) << c.source() << "\n" << r.front_error->what();
        EXPECT_EQ(r.decls.at(0).report.accepted, c.expected) << c.source() << "\n" << r.decls.at(0).report.reason;
        positives += c.expected;
    }
    // Both outcomes must be well represented.
    EXPECT_GT(positives, 150);
    EXPECT_LT(positives, 550);
}

TEST(Linearity, ExchangeInvariance) {
    LinGen gen(11);
    int permuted = 0;
    for (int i = 0; i < 600; ++i) {
        const LinCase c = gen.next();
        if (c.zone.size() < 2) continue;
        const auto order = gen.permuted(c.zone);
        EXPECT_EQ(accepted(c.source(order)), accepted(c.source())) << c.source(order);
        ++permuted;
    }
    EXPECT_GE(permuted, 300);
}

TEST(Linearity, NoWeakeningOrContraction) {
    EXPECT_TRUE(accepted("check (A : L) ( ; u : A) u : A;"));
    EXPECT_FALSE(accepted("check (A : L) ( ; u v : A) u : A;"));
    EXPECT_FALSE(accepted("check (A : L) ( ; u : A) u ** u : A * A;"));
    EXPECT_TRUE(accepted("check (A : L) ( ; u : A) <u, u> : A & A;"));
    EXPECT_TRUE(accepted("check (A : U) (X : U) (x : X) ( ; y : Lt A) let a be y in lift a : Lt A;"));
}

}  // namespace
}  // namespace ldtt
