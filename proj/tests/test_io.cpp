#include <gtest/gtest.h>

#include <sstream>

#include "usched/usched.hpp"

using namespace usched;

namespace {

std::size_t parse_error_line(const std::string &text) {
  try {
    parse_instance(text);
  } catch (const ParseError &e) {
    return e.line();
  }
  return static_cast<std::size_t>(-1);
}

} // namespace

TEST(InstanceFile, ParsesArcsOneBased) {
  auto t = parse_instance("c a comment\n\np usched 3 2\na 1 2\n  a 2   3\n");
  EXPECT_EQ(t.jobs, 3u);
  EXPECT_EQ(t.machines, 2u);
  EXPECT_EQ(t.arcs, (std::vector<Arc>{{0, 1}, {1, 2}}));
  EXPECT_EQ(t.comments, std::vector<std::string>{"a comment"});
  auto inst = t.to_instance();
  EXPECT_TRUE(inst.graph.precedes(0, 2));
}

TEST(InstanceFile, CanonicalRoundTrip) {
  const std::string canonical = "c grid 2 2\np usched 4 1\na 1 2\na 1 3\na 2 4\na 3 4\n";
  EXPECT_EQ(format_instance(parse_instance(canonical)), canonical);
  auto messy = parse_instance("p usched 4 1\na 3 4\na 1 2\na 1 3\na 2 4\na 1 2\n");
  EXPECT_EQ(format_instance(messy), "p usched 4 1\na 1 2\na 1 3\na 2 4\na 3 4\n");
  auto again = parse_instance(format_instance(messy));
  EXPECT_EQ(format_instance(again), format_instance(messy));
}

TEST(InstanceFile, GeneratedFilesRoundTrip) {
  for (const auto &t : {gen::chain(5, 2), gen::chains(3, 3, 3), gen::grid(3, 4, 2),
                        gen::outstar(6, 3), gen::antichain(4, 2),
                        gen::random(12, 0.3, 7, 3)}) {
    const std::string text = format_instance(t);
    EXPECT_EQ(format_instance(parse_instance(text)), text);
  }
}

TEST(InstanceFile, ErrorsCarryTheLineNumber) {
  EXPECT_EQ(parse_error_line("a 1 2\n"), 1u);
  EXPECT_EQ(parse_error_line("p usched 2 1\np usched 2 1\n"), 2u);
  EXPECT_EQ(parse_error_line("p usched 2 0\n"), 1u);
  EXPECT_EQ(parse_error_line("p usched 2 1\na 1 3\n"), 2u);
  EXPECT_EQ(parse_error_line("p usched 2 1\na 0 1\n"), 2u);
  EXPECT_EQ(parse_error_line("p usched 2 1\na 1 1\n"), 2u);
  EXPECT_EQ(parse_error_line("p usched 2 1\na 1\n"), 2u);
  EXPECT_EQ(parse_error_line("p usched 2 1\n\nx 1 2\n"), 3u);
  EXPECT_EQ(parse_error_line("p usched -2 1\n"), 1u);
  EXPECT_EQ(parse_error_line("p dks 2 1\n"), 1u);
  EXPECT_EQ(parse_error_line("c only comments\n"), 0u);
  EXPECT_EQ(parse_error_line("p usched 99999999999999999999999 1\n"), 1u);
}

TEST(InstanceFile, CyclesAreRejectedOnLoad) {
  auto t = parse_instance("p usched 3 1\na 1 2\na 2 3\na 3 1\n");
  EXPECT_THROW(t.to_instance(), CycleDetected);
}

TEST(ScheduleFile, RoundTrip) {
  Schedule s{{JobSet{0}, JobSet{1, 2}, JobSet{}, JobSet{3}}, 2};
  const std::string text = format_schedule(s);
  EXPECT_EQ(text, "1\n2 3\n\n4\n");
  auto back = parse_schedule("1\n2 3\n", 2);
  EXPECT_EQ(back.slots, (std::vector<JobSet>{JobSet{0}, JobSet{1, 2}}));
  EXPECT_EQ(back.machines, 2u);
}

TEST(ScheduleFile, BlankLineEndsTheSchedule) {
  auto s = parse_schedule("1 2\n3\n\n4\n", 2);
  EXPECT_EQ(s.makespan(), 2u);
  EXPECT_FALSE(s.jobs().contains(3));
}

TEST(ScheduleFile, Errors) {
  EXPECT_THROW(parse_schedule("1 2\n2\n", 2), ParseError);
  EXPECT_THROW(parse_schedule("0\n", 2), ParseError);
  EXPECT_THROW(parse_schedule("x\n", 2), ParseError);
  EXPECT_THROW(parse_schedule("257\n", 2), ParseError);
  EXPECT_NO_THROW(parse_schedule("256\n", 2));
}

TEST(DksFile, ParseAndWrite) {
  auto d = parse_dks("c triangle\np dks 3 3 2 1\ne 1 2\ne 2 3\ne 1 3\n");
  EXPECT_EQ(d.vertices, 3u);
  EXPECT_EQ(d.kappa, 2u);
  EXPECT_EQ(d.ell, 1u);
  ASSERT_EQ(d.edges.size(), 3u);
  EXPECT_EQ(d.edges[2], (std::pair<std::size_t, std::size_t>{0, 2}));
  std::ostringstream out;
  write_dks(out, d);
  EXPECT_EQ(out.str(), "p dks 3 3 2 1\ne 1 2\ne 2 3\ne 1 3\n");
  auto again = parse_dks(out.str());
  EXPECT_EQ(again.edges, d.edges);
}

TEST(DksFile, Errors) {
  EXPECT_THROW(parse_dks("p dks 3 2 2 1\ne 1 2\n"), ParseError);
  EXPECT_THROW(parse_dks("e 1 2\n"), ParseError);
  EXPECT_THROW(parse_dks("p dks 3 1 2\ne 1 2\n"), ParseError);
  EXPECT_THROW(parse_dks("p dks 3 1 2 1\ne 1 4\n"), ParseError);
  EXPECT_THROW(parse_dks(""), ParseError);
}

TEST(Generators, ChainsAndGrid) {
  auto c = gen::chains(3, 3, 3);
  EXPECT_EQ(c.jobs, 9u);
  EXPECT_EQ(c.arcs.size(), 6u);
  auto g = gen::grid(2, 2, 1);
  EXPECT_EQ(g.jobs, 4u);
  EXPECT_EQ(g.arcs.size(), 4u);
  EXPECT_EQ(g.to_instance().graph.height(), 3u);
  EXPECT_EQ(gen::grid(3, 4, 1).to_instance().graph.height(), 6u);
}

TEST(Generators, OtherFamilies) {
  auto o = gen::outstar(4, 2).to_instance();
  EXPECT_EQ(o.size(), 5u);
  EXPECT_EQ(o.graph.sinks(), (JobSet{1, 2, 3, 4}));
  auto a = gen::antichain(6, 2).to_instance();
  EXPECT_EQ(a.graph.sinks().size(), 6u);
  EXPECT_EQ(a.graph.sources().size(), 6u);
  auto ch = gen::chain(4, 1).to_instance();
  EXPECT_EQ(ch.graph.height(), 4u);
}

TEST(Generators, RandomIsDeterministicPerSeed) {
  EXPECT_EQ(format_instance(gen::random(10, 0.3, 7, 2)),
            format_instance(gen::random(10, 0.3, 7, 2)));
  EXPECT_NE(format_instance(gen::random(10, 0.3, 7, 2)),
            format_instance(gen::random(10, 0.3, 8, 2)));
  EXPECT_TRUE(gen::random(10, 0.0, 1, 2).arcs.empty());
  EXPECT_EQ(gen::random(10, 1.0, 1, 2).arcs.size(), 45u);
  EXPECT_THROW(gen::random(10, 1.5, 1, 2), BadParams);
  EXPECT_THROW(gen::random(10, -0.1, 1, 2), BadParams);
}
