#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "f2s/sandbox/sandbox.hpp"
#include "helpers.hpp"

using namespace f2s;
using namespace f2s::sandbox;
using f2s::testing::TempDir;

namespace {

ExecLimits limits(double wall = 5) {
  ExecLimits l;
  l.wall_time_s = wall;
  return l;
}

CodeSnippet py(const std::string& id, const std::string& text) {
  return CodeSnippet::make(id, Language::python, text);
}

CodeSnippet c(const std::string& id, const std::string& text) {
  return CodeSnippet::make(id, Language::c, text);
}

const char* kEcho = "import sys\nsys.stdout.write(sys.stdin.read())\n";
const char* kProduct = R"(#include <stdio.h>
int main(void) {
  long long a, b;
  scanf("%lld %lld", &a, &b);
  printf("%lld\n", a * b);
  return 0;
}
)";

std::vector<TestCase> inputs(std::initializer_list<const char*> in) {
  std::vector<TestCase> out;
  for (const char* s : in) out.push_back({s, std::nullopt});
  return out;
}

class SandboxTest : public ::testing::Test {
 protected:
  TempDir dir;
  Sandbox sb{default_toolchains(), dir.path()};
};

}  // namespace

TEST(Normalize, Rules) {
  EXPECT_TRUE(compare_outputs("1 2\n", "1 2  \r\n"));
  EXPECT_TRUE(compare_outputs("1\n2\n", "1\n2"));
  EXPECT_TRUE(compare_outputs("x\n\n\n", "x"));
  EXPECT_FALSE(compare_outputs("1.0", "1.00"));
  EXPECT_FALSE(compare_outputs(" 1", "1"));
  EXPECT_EQ(normalize_output("a \r\nb\t\n\n"), "a\nb\n");
  EXPECT_EQ(normalize_output("\n\n"), "");
}

TEST(Normalize, NumericPolicy) {
  OutputPolicy p{true, 1e-6};
  EXPECT_TRUE(compare_outputs("1.0", "1.00", p));
  EXPECT_TRUE(compare_outputs("3.1415926 x", "3.1415927  x\n", p));
  EXPECT_FALSE(compare_outputs("1.0", "1.1", p));
  EXPECT_FALSE(compare_outputs("1 2", "1", p));
  EXPECT_FALSE(compare_outputs("abc", "abd", p));
}

TEST(Normalize, Idempotent) {
  std::mt19937_64 rng(21);
  const char alphabet[] = {'a', ' ', '\n', '\r', '\t', '1'};
  for (int i = 0; i < 300; ++i) {
    std::string s(rng() % 20, 'a');
    for (auto& ch : s) ch = alphabet[rng() % sizeof alphabet];
    EXPECT_EQ(normalize_output(normalize_output(s)), normalize_output(s));
    EXPECT_TRUE(compare_outputs(s, normalize_output(s)));
  }
}

TEST(Limits, Validation) {
  ExecLimits l;
  EXPECT_NO_THROW(l.validate());
  l.wall_time_s = 0;
  EXPECT_THROW(l.validate(), ArgumentError);
  l = ExecLimits{};
  l.max_output = 0;
  EXPECT_THROW(l.validate(), ArgumentError);
}

TEST(JavaMainClass, Detection) {
  EXPECT_EQ(java_main_class("public class Solver { public static void main(String[] a) {} }"),
            "Solver");
  EXPECT_EQ(java_main_class("class A {}"), "Main");
}

TEST_F(SandboxTest, EchoPython) {
  auto r = sb.run_program(py("echo", kEcho), "7\n", limits());
  EXPECT_EQ(r.status, ExecStatus::ok);
  EXPECT_EQ(r.stdout_data, "7\n");
  EXPECT_LE(r.wall_ms, 5000);
}

TEST_F(SandboxTest, CompiledCIsCachedByContent) {
  auto code = c("prod", kProduct);
  auto r1 = sb.run_program(code, "6 7\n", limits());
  auto r2 = sb.run_program(code, "2 3\n", limits());
  EXPECT_EQ(r1.stdout_data, "42\n");
  EXPECT_EQ(r2.stdout_data, "6\n");
  EXPECT_EQ(sb.compilations(), 1u);
  // Same text under another id shares the build.
  sb.run_program(c("other-id", kProduct), "1 1\n", limits());
  EXPECT_EQ(sb.compilations(), 1u);
  // A fresh sandbox on the same directory reuses the on-disk cache.
  Sandbox again(default_toolchains(), dir.path());
  EXPECT_EQ(again.run_program(code, "3 3\n", limits()).stdout_data, "9\n");
  EXPECT_EQ(again.compilations(), 0u);
}

TEST_F(SandboxTest, Cpp) {
  auto r = sb.run_program(
      CodeSnippet::make("cpp", Language::cpp,
                        "#include <iostream>\nint main() { int x; std::cin >> x; std::cout << x * 2 << '\\n'; }\n"),
      "21\n", limits(20));
  EXPECT_EQ(r.status, ExecStatus::ok);
  EXPECT_EQ(r.stdout_data, "42\n");
}

TEST_F(SandboxTest, CompileError) {
  auto r = sb.run_program(c("bad", "int main(void) { return 0 }\n"), "", limits());
  EXPECT_EQ(r.status, ExecStatus::compile_error);
  EXPECT_FALSE(r.stderr_data.empty());
  EXPECT_TRUE(r.stdout_data.empty());
  // Cached compile errors are not rebuilt.
  sb.run_program(c("bad2", "int main(void) { return 0 }\n"), "", limits());
  EXPECT_EQ(sb.compilations(), 1u);
}

TEST_F(SandboxTest, Timeout) {
  auto r = sb.run_program(py("spin", "while True:\n    pass\n"), "", limits(1));
  EXPECT_EQ(r.status, ExecStatus::timeout);
  EXPECT_TRUE(r.stdout_data.empty());
  EXPECT_LT(r.wall_ms, 5000);
}

TEST_F(SandboxTest, RuntimeErrorKeepsStdout) {
  auto r = sb.run_program(py("boom", "print('partial')\nraise SystemExit(3)\n"), "", limits());
  EXPECT_EQ(r.status, ExecStatus::runtime_error);
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_EQ(r.stdout_data, "partial\n");
  auto s = sb.run_program(c("segv", "int main(void) { volatile int *p = 0; return *p; }\n"), "", limits());
  EXPECT_EQ(s.status, ExecStatus::runtime_error);
  EXPECT_NE(s.term_signal, 0);
}

TEST_F(SandboxTest, OutputOverflow) {
  ExecLimits l = limits();
  l.max_output = 1000;
  auto r = sb.run_program(py("flood", "while True:\n    print('x' * 100)\n"), "", l);
  EXPECT_EQ(r.status, ExecStatus::output_overflow);
  EXPECT_TRUE(r.stdout_data.empty());
}

TEST_F(SandboxTest, MemoryLimit) {
  ExecLimits l = limits();
  l.memory_bytes = std::size_t{64} << 20;
  auto r = sb.run_program(py("hog", "x = bytearray(512 * 1024 * 1024)\nprint(len(x))\n"), "", l);
  EXPECT_EQ(r.status, ExecStatus::runtime_error);
}

TEST_F(SandboxTest, RunsInScratchDirectory) {
  auto r = sb.run_program(py("cwd", "import os\nopen('scratch.txt', 'w').write('x')\nprint(os.getcwd())\n"),
                          "", limits());
  ASSERT_EQ(r.status, ExecStatus::ok);
  std::string cwd = r.stdout_data.substr(0, r.stdout_data.size() - 1);
  EXPECT_NE(cwd, std::filesystem::current_path().string());
  EXPECT_FALSE(std::filesystem::exists(cwd));
}

TEST(SandboxToolchains, MissingToolchainIsAConfigError) {
  TempDir dir;
  ToolchainMap map;
  map[Language::python] = {{}, {"/nonexistent/python9", "{src}"}, "main.py", true};
  Sandbox sb(map, dir.path());
  EXPECT_FALSE(sb.has_toolchain(Language::python));
  EXPECT_FALSE(sb.has_toolchain(Language::go));
  EXPECT_THROW(sb.require_toolchain(Language::go), ToolchainMissingError);
  EXPECT_THROW(sb.run_program(py("p", "print(1)\n"), "", limits()), ToolchainMissingError);
  EXPECT_THROW(sb.run_program(CodeSnippet::make("g", Language::go, "package main\n"), "", limits()),
               ToolchainMissingError);
}

TEST(SandboxToolchains, GoAndJavaWhenInstalled) {
  TempDir dir;
  Sandbox sb(default_toolchains(), dir.path());
  int ran = 0;
  if (sb.has_toolchain(Language::go)) {
    auto r = sb.run_program(CodeSnippet::make("g", Language::go,
                                              "package main\nimport \"fmt\"\nfunc main() { fmt.Println(5) }\n"),
                            "", limits(60));
    EXPECT_EQ(r.stdout_data, "5\n");
    ++ran;
  }
  if (sb.has_toolchain(Language::java)) {
    auto r = sb.run_program(
        CodeSnippet::make("j", Language::java,
                          "public class Hello { public static void main(String[] a) { System.out.println(5); } }\n"),
        "", limits(60));
    EXPECT_EQ(r.stdout_data, "5\n");
    ++ran;
  }
  if (ran == 0) GTEST_SKIP() << "neither go nor javac is installed";
}

TEST_F(SandboxTest, SelfDifferentialTestPasses) {
  auto tests = inputs({"1 2\n", "3 4\n", "0 9\n", "-2 5\n", "7 7\n"});
  auto report = differential_test(sb, c("p", kProduct), c("p2", kProduct), tests);
  EXPECT_TRUE(report.pass_all);
  EXPECT_EQ(report.category, Category::pass);
  ASSERT_EQ(report.per_input.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(report.per_input[i].input_id, i);
}

TEST_F(SandboxTest, SumInsteadOfProductOnOneInput) {
  // 2*2 == 2+2, 0*0 == 0+0, 3*5 != 3+5.
  auto tgt = py("sum", "a, b = map(int, input().split())\nprint(a + b)\n");
  auto report = differential_test(sb, c("p", kProduct), tgt, inputs({"2 2\n", "3 5\n", "0 0\n"}));
  EXPECT_FALSE(report.pass_all);
  EXPECT_EQ(report.category, Category::incorrect_output);
  EXPECT_TRUE(report.per_input[0].match);
  EXPECT_FALSE(report.per_input[1].match);
  EXPECT_TRUE(report.per_input[2].match);
}

TEST_F(SandboxTest, TargetCompileErrorFailsEveryInput) {
  std::string broken = kProduct;
  broken.replace(broken.find("return 0;"), 9, "return 0");
  auto report = differential_test(sb, c("p", kProduct), c("t", broken), inputs({"1 2\n", "3 4\n"}));
  EXPECT_EQ(report.category, Category::compile_error);
  for (const auto& o : report.per_input) EXPECT_FALSE(o.match);
}

TEST_F(SandboxTest, ExpectedOutputIsTheReference) {
  std::vector<TestCase> tests{{"2 3\n", std::string("6\n")}, {"2 2\n", std::string("5\n")}};
  auto report = differential_test(sb, c("p", kProduct), c("q", kProduct), tests);
  EXPECT_TRUE(report.per_input[0].match);
  EXPECT_FALSE(report.per_input[1].match);
}

TEST_F(SandboxTest, SourceFailureInvalidatesPair) {
  auto src = py("bad", "raise SystemExit(1)\n");
  try {
    differential_test(sb, src, py("t", kEcho), inputs({"1\n"}));
    FAIL() << "expected PairInvalidError";
  } catch (const PairInvalidError& e) {
    EXPECT_EQ(e.input_id, 0u);
    EXPECT_EQ(e.result.status, ExecStatus::runtime_error);
  }
}

TEST_F(SandboxTest, ParallelJobsKeepInputOrder) {
  std::vector<TestCase> tests;
  for (int i = 0; i < 12; ++i) tests.push_back({std::to_string(i) + "\n", std::nullopt});
  DiffOptions o;
  o.jobs = 4;
  auto report = differential_test(sb, py("e", kEcho), py("e2", kEcho), tests, o);
  EXPECT_TRUE(report.pass_all);
  for (int i = 0; i < 12; ++i)
    EXPECT_EQ(report.per_input[static_cast<std::size_t>(i)].src_result.stdout_data,
              std::to_string(i) + "\n");
}

TEST_F(SandboxTest, RepeatFlagsUnstableSource) {
  auto src = py("rand", "import os\nprint(os.urandom(8).hex())\n");
  DiffOptions o;
  o.repeat = true;
  auto report = differential_test(sb, src, py("t", "print(1)\n"), inputs({"\n"}), o);
  EXPECT_TRUE(report.per_input[0].unstable);
}

TEST(Categorize, PrecedenceIsTotal) {
  auto outcome = [](ExecStatus s, bool match) {
    InputOutcome o;
    o.tgt_result.status = s;
    o.match = match;
    return o;
  };
  EXPECT_EQ(categorize({outcome(ExecStatus::ok, true)}), Category::pass);
  EXPECT_EQ(categorize({outcome(ExecStatus::ok, false), outcome(ExecStatus::runtime_error, false)}),
            Category::runtime_error);
  EXPECT_EQ(categorize({outcome(ExecStatus::runtime_error, false), outcome(ExecStatus::timeout, false)}),
            Category::timeout);
  EXPECT_EQ(categorize({outcome(ExecStatus::timeout, false), outcome(ExecStatus::compile_error, false)}),
            Category::compile_error);
  EXPECT_EQ(categorize({outcome(ExecStatus::output_overflow, false)}), Category::runtime_error);
  EXPECT_EQ(categorize({outcome(ExecStatus::ok, true), outcome(ExecStatus::ok, false)}),
            Category::incorrect_output);
  // Random outcome lists always map to exactly one category, and pass iff all match.
  std::mt19937_64 rng(22);
  const ExecStatus statuses[] = {ExecStatus::ok, ExecStatus::compile_error, ExecStatus::runtime_error,
                                 ExecStatus::timeout, ExecStatus::output_overflow};
  for (int i = 0; i < 200; ++i) {
    std::vector<InputOutcome> v;
    for (std::size_t k = 0; k < 1 + rng() % 5; ++k) {
      auto s = statuses[rng() % 5];
      v.push_back(outcome(s, s == ExecStatus::ok && rng() % 3 != 0));
    }
    bool all = std::all_of(v.begin(), v.end(), [](const InputOutcome& o) { return o.match; });
    EXPECT_EQ(categorize(v) == Category::pass, all);
  }
}

TEST(ComputeCa, Counts) {
  auto report = [](Category c) {
    DiffTestReport r;
    r.category = c;
    r.pass_all = c == Category::pass;
    return r;
  };
  std::vector<DiffTestReport> v;
  for (int i = 0; i < 7; ++i) v.push_back(report(Category::pass));
  v.push_back(report(Category::compile_error));
  v.push_back(report(Category::timeout));
  v.push_back(report(Category::incorrect_output));
  auto s = compute_ca(v);
  EXPECT_EQ(s.total, 10u);
  EXPECT_EQ(s.passed, 7u);
  EXPECT_DOUBLE_EQ(s.ca, 0.7);
  std::size_t sum = 0;
  for (auto cat : kCategories) sum += s.counts.at(cat);
  EXPECT_EQ(sum, s.total);
  std::mt19937_64 rng(23);
  for (int i = 0; i < 20; ++i) {
    std::shuffle(v.begin(), v.end(), rng);
    EXPECT_EQ(compute_ca(v).ca, s.ca);
  }
  EXPECT_EQ(compute_ca({report(Category::pass)}).ca, 1.0);
  EXPECT_EQ(compute_ca({report(Category::timeout)}).ca, 0.0);
  EXPECT_THROW(compute_ca({}), ArgumentError);
}

TEST_F(SandboxTest, MaterializeExpected) {
  auto src = c("p", kProduct);
  auto tests = inputs({"1 2\n", "3 4\n", "5 6\n"});
  auto once = materialize_expected(sb, src, tests, limits());
  ASSERT_EQ(once.tests.size(), 3u);
  EXPECT_EQ(*once.tests[1].expected_output, "12\n");
  auto twice = materialize_expected(sb, src, once.tests, limits());
  EXPECT_EQ(twice.tests, once.tests);
  EXPECT_TRUE(twice.warnings.empty());

  auto stale = once.tests;
  stale[0].expected_output = "999\n";
  auto kept = materialize_expected(sb, src, stale, limits());
  EXPECT_EQ(*kept.tests[0].expected_output, "999\n");
  EXPECT_EQ(kept.warnings.size(), 1u);
}

TEST_F(SandboxTest, MaterializeNamesFailingInput) {
  auto src = py("slow", "import sys\nif sys.stdin.read().strip() == 'b':\n    while True:\n        pass\nprint(1)\n");
  try {
    materialize_expected(sb, src, inputs({"a\n", "b\n", "c\n"}), limits(1));
    FAIL() << "expected PairInvalidError";
  } catch (const PairInvalidError& e) {
    EXPECT_EQ(e.input_id, 1u);
    EXPECT_EQ(e.result.status, ExecStatus::timeout);
  }
}

TEST_F(SandboxTest, ReportJson) {
  auto report = differential_test(sb, py("e", kEcho), py("e2", kEcho), inputs({"x\n"}));
  auto j = to_json(report);
  EXPECT_EQ(j["pass_all"], true);
  EXPECT_EQ(j["category"], "pass");
  EXPECT_EQ(j["per_input"][0]["src_result"]["stdout"], "x\n");
}
