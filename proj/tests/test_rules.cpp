#include <gtest/gtest.h>

#include <set>

#include "support.hpp"
#include "rule_cases.hpp"

namespace ldtt {
namespace {

using testing::probe;

TEST(Rules, EveryRuleHasBothPolarities) {
    std::set<std::string> pos, neg;
    for (const auto& c : rule_cases()) (c.positive ? pos : neg).insert(c.rule);
    for (const auto& r : calculus_rules()) {
        EXPECT_TRUE(pos.count(r)) << r << " lacks a positive case";
        EXPECT_TRUE(neg.count(r)) << r << " lacks a negative case";
    }
}

class RuleCase : public ::testing::TestWithParam<RuleCaseData> {};

TEST_P(RuleCase, Behaves) {
    const auto& c = GetParam();
    const auto p = probe(c.source);
    if (c.positive) {
        ASSERT_FALSE(p.front_error) << p.reason;
        EXPECT_TRUE(p.accepted) << p.reason;
        EXPECT_TRUE(p.used(c.rule) || std::count(p.redexes.begin(), p.redexes.end(), c.rule)) << c.rule << " not exercised";
    } else {
        EXPECT_FALSE(p.accepted);
        if (c.error) {
            ASSERT_TRUE(p.error.has_value());
            EXPECT_EQ(to_string(*p.error), std::string(to_string(*c.error))) << p.reason;
        }
    }
}

std::string case_name(const ::testing::TestParamInfo<RuleCaseData>& info) {
    return "case" + std::to_string(info.index) + (info.param.positive ? "_pos" : "_neg");
}

INSTANTIATE_TEST_SUITE_P(All, RuleCase, ::testing::ValuesIn(rule_cases()), case_name);

}  // namespace
}  // namespace ldtt
