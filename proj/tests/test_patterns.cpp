#include <gtest/gtest.h>

#include "eipsynth/errors.hpp"
#include "eipsynth/patterns/eip.hpp"
#include "properties.hpp"
#include "support.hpp"

using namespace eipsynth;
using namespace eipsynth::patterns;
using schema::FieldPath;
using schema::QName;

namespace {

const QName kAdd{"Client", "addProduct", "addProductRequest"};
const QName kQty{"Client", "setQuantity", "setQuantityRequest"};
const QName kPromo{"Client", "setPromotionCode", "setPromotionCodeRequest"};
const QName kCdAdd{"CD_Client_SmartCart", "addProduct", "addProductRequest"};

RuntimeMessage msg(const QName& q, Json payload, const std::string& token = "Client#1")
{
    return RuntimeMessage{q, std::move(payload), Headers{token, std::nullopt, "Client", 0}};
}

FieldPath path(const std::string& dotted)
{
    return FieldPath::parse(dotted);
}

Aggregator golden_aggregator()
{
    Aggregator a;
    a.expected = {kAdd, kQty};
    a.target = kCdAdd;
    a.merge_map[kAdd] = {{path("product.id"), path("product.id")},
                         {path("product.description"), path("product.description")}};
    a.merge_map[kQty] = {{path("quantity"), path("quantity")}};
    return a;
}

const Json kAddPayload = Json::parse(R"({"product": {"id": "p1", "description": "milk"}})");
const Json kQtyPayload = Json::parse(R"({"quantity": 3})");

} // namespace

TEST(Chain, FilterThenAggregatorYieldsOneCdMessage)
{
    std::vector<PatternInstance> chain{MessageFilter{{kPromo}}, golden_aggregator()};
    Channel in("in"), out("out");
    in.push(msg(kAdd, kAddPayload));
    in.push(msg(kQty, kQtyPayload));
    in.push(msg(kPromo, Json{{"promotionCode", "SPRING10"}}));
    ChainState state;
    run_chain(chain, in, out, state);

    ASSERT_EQ(out.size(), 1u);
    auto m = out.pop();
    EXPECT_EQ(m.qname, kCdAdd);
    EXPECT_EQ(m.payload, Json::parse(R"({"product": {"id": "p1", "description": "milk"}, "quantity": 3})"));
    EXPECT_EQ(m.headers.correlation_id, "Client#1");
    ASSERT_EQ(state.diversions.size(), 1u);
    EXPECT_EQ(state.diversions[0].kind, Diversion::Kind::Dropped);
    EXPECT_EQ(state.diversions[0].message.qname, kPromo);
}

TEST(Chain, UnroutableMessagesGoToDeadLetter)
{
    std::vector<PatternInstance> chain{golden_aggregator()};
    ChainState state;
    EXPECT_TRUE(step_chain(chain, state, msg(kAdd, kAddPayload)).empty());
    // A second addProduct before the quantity arrives is a duplicate for the token.
    EXPECT_TRUE(step_chain(chain, state, msg(kAdd, kAddPayload)).empty());
    ASSERT_EQ(state.diversions.size(), 1u);
    EXPECT_EQ(state.diversions[0].kind, Diversion::Kind::DeadLetter);
    EXPECT_EQ(state.stages[0].buffered(), 1u);
    // Messages the stage does not handle pass through untouched.
    auto passed = step_chain(chain, state, msg(kPromo, Json{{"promotionCode", "x"}}));
    ASSERT_EQ(passed.size(), 1u);
    EXPECT_EQ(passed[0].qname, kPromo);
}

TEST(Aggregator, CorrelatesByToken)
{
    auto cfg = golden_aggregator();
    PatternState state;
    EXPECT_FALSE(aggregator_process(cfg, state, msg(kAdd, kAddPayload, "a")));
    EXPECT_FALSE(aggregator_process(cfg, state, msg(kQty, kQtyPayload, "b")));
    EXPECT_EQ(state.buffered(), 2u);
    auto done = aggregator_process(cfg, state, msg(kQty, Json{{"quantity", 5}}, "a"));
    ASSERT_TRUE(done);
    EXPECT_EQ(done->payload["quantity"], 5);
    EXPECT_EQ(state.buffered(), 1u);
}

TEST(Aggregator, RejectsWithoutTouchingState)
{
    auto cfg = golden_aggregator();
    PatternState state;
    aggregator_process(cfg, state, msg(kAdd, kAddPayload));
    auto before = state;
    EXPECT_THROW(aggregator_process(cfg, state, msg(kPromo, Json::object())), RoutingError);
    EXPECT_THROW(aggregator_process(cfg, state, msg(kAdd, kAddPayload)), RoutingError);
    EXPECT_EQ(state, before);
}

TEST(Splitter, MissingSourceLeafIsARoutingError)
{
    Splitter s{kCdAdd, {{QName{"S", "a", "b"}, {{path("quantity"), path("amount")}}}}};
    EXPECT_THROW(splitter_process(s, msg(kCdAdd, Json{{"other", 1}})), RoutingError);
    EXPECT_THROW(splitter_process(s, msg(kAdd, kQtyPayload)), RoutingError);
    auto parts = splitter_process(s, msg(kCdAdd, kQtyPayload));
    ASSERT_EQ(parts.size(), 1u);
    EXPECT_EQ(parts[0].payload, (Json{{"amount", 3}}));
    EXPECT_EQ(parts[0].headers.sequence_index, 1u);
}

TEST(Resequencer, RejectsUnknownAndRepeatedMessages)
{
    Resequencer r{{kQty, kAdd}};
    PatternState state;
    EXPECT_THROW(resequencer_process(r, state, msg(kPromo, Json::object())), RoutingError);
    EXPECT_TRUE(resequencer_process(r, state, msg(kAdd, kAddPayload)).empty());
    EXPECT_THROW(resequencer_process(r, state, msg(kAdd, kAddPayload)), RoutingError);
    auto out = resequencer_process(r, state, msg(kQty, kQtyPayload));
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0].qname, kQty);
    EXPECT_EQ(out[1].qname, kAdd);
}

TEST(Filter, DropsOnlyItsSet)
{
    MessageFilter f{{kPromo}};
    EXPECT_FALSE(filter_process(f, msg(kPromo, Json::object())));
    EXPECT_TRUE(filter_process(f, msg(kAdd, kAddPayload)));
}

TEST(Validation, InstanceInvariants)
{
    EXPECT_THROW(validate_instance(MessageFilter{}), ConfigurationError);
    EXPECT_THROW(validate_instance(Resequencer{{kAdd, kAdd}}), ConfigurationError);
    EXPECT_THROW(validate_instance(Splitter{kCdAdd, {}}), ConfigurationError);
    auto single = golden_aggregator();
    single.expected = {kAdd};
    EXPECT_THROW(validate_instance(single), ConfigurationError);
    EXPECT_NO_THROW(validate_instance(golden_aggregator()));
}

TEST(Validation, ChainFlowNeedsAProducer)
{
    std::vector<PatternInstance> chain{golden_aggregator()};
    EXPECT_EQ(chain_flow(chain, {kAdd, kQty, kPromo}), (std::set<QName>{kCdAdd, kPromo}));
    EXPECT_THROW(chain_flow(chain, {kAdd}), ConfigurationError);
}

TEST(Payload, KindsAndDates)
{
    using schema::PrimitiveKind;
    EXPECT_TRUE(value_has_kind("-12.50", PrimitiveKind::Decimal));
    EXPECT_FALSE(value_has_kind(12.5, PrimitiveKind::Decimal));
    EXPECT_FALSE(value_has_kind("1.", PrimitiveKind::Decimal));
    EXPECT_TRUE(value_has_kind("2024-02-29", PrimitiveKind::Date));
    EXPECT_FALSE(value_has_kind("2023-02-29", PrimitiveKind::Date));
    EXPECT_FALSE(value_has_kind("2100-02-29", PrimitiveKind::Date));
    EXPECT_TRUE(value_has_kind("2000-02-29", PrimitiveKind::Date));
    EXPECT_FALSE(value_has_kind("2024-13-01", PrimitiveKind::Date));
    EXPECT_FALSE(value_has_kind(1, PrimitiveKind::Boolean));
    EXPECT_FALSE(value_has_kind(1.5, PrimitiveKind::Int));
}

TEST(Payload, ValidationIsExact)
{
    auto s = schema::MessageSchema(kQty, schema::TypeNode::record({{"quantity", schema::TypeNode::primitive(schema::PrimitiveKind::Int)}}));
    EXPECT_NO_THROW(validate_payload(s, kQtyPayload));
    EXPECT_THROW(validate_payload(s, Json::object()), InvariantViolation);
    EXPECT_THROW(validate_payload(s, Json{{"quantity", "3"}}), InvariantViolation);
    EXPECT_THROW(validate_payload(s, Json{{"quantity", 3}, {"extra", 1}}), InvariantViolation);
}

TEST(Payload, DigestIsStableAndKeyOrderFree)
{
    // Reference values computed independently over the compact sorted-key dump.
    EXPECT_EQ(payload_digest(Json::parse(R"({"b": 2, "a": {"y": "x"}})")), "c9635956398db3ec");
    EXPECT_EQ(payload_digest(Json::object()), "44136fa355b3678a");
}

TEST(Channel, CapacityIsEnforced)
{
    Channel c("bounded", 1);
    c.push(msg(kAdd, kAddPayload));
    EXPECT_TRUE(c.full());
    EXPECT_THROW(c.push(msg(kQty, kQtyPayload)), ConfigurationError);
    EXPECT_EQ(c.pop().qname, kAdd);
    EXPECT_TRUE(c.empty());
}

TEST(PatternJson, RoundTrips)
{
    std::vector<PatternInstance> all{
        MessageFilter{{kPromo}}, golden_aggregator(), Resequencer{{kQty, kAdd}},
        Splitter{kCdAdd, {{QName{"S", "a", "b"}, {{path("quantity"), path("amount")}}}}}};
    auto constant = golden_aggregator();
    constant.correlation = Aggregator::Correlation::Constant;
    constant.constant_token = "session";
    all.push_back(constant);
    for (const auto& p : all)
        EXPECT_EQ(pattern_from_json(to_json(p)), p) << pattern_name(p);
}

TEST(PatternProperty, SplitAggregateRoundTrip)
{
    auto r = testkit::split_aggregate_roundtrip(500, 31337);
    EXPECT_EQ(r.cases, 500u);
    EXPECT_EQ(r.failures, 0u) << r.first_failure;
}

TEST(PatternProperty, ResequencerReleasesStrictPrefixes)
{
    auto r = testkit::resequencer_permutations(4, 8, 300, 4242);
    EXPECT_EQ(r.cases, 1u + 2 + 6 + 24 + 300);
    EXPECT_EQ(r.failures, 0u) << r.first_failure;
}
