// Acceptance gate: one PASS/FAIL line per criterion on stdout, followed by
// the gtest summary. A criterion whose prerequisite is missing reports SKIP.
#include <cstdio>

#include <gtest/gtest.h>

namespace {

class CriterionPrinter : public ::testing::EmptyTestEventListener {
  void OnTestPartResult(const ::testing::TestPartResult& r) override {
    if (r.failed()) {
      std::printf("    %s:%d: %s\n", r.file_name() ? r.file_name() : "?", r.line_number(), r.message());
    }
  }

  void OnTestEnd(const ::testing::TestInfo& info) override {
    const auto* r = info.result();
    const char* verdict = r->Skipped() ? "SKIP" : r->Passed() ? "PASS" : "FAIL";
    std::printf("%s  %-40s %8.2f s\n", verdict, info.name(), static_cast<double>(r->elapsed_time()) / 1000.0);
    std::fflush(stdout);
  }
};

}  // namespace

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  auto& listeners = ::testing::UnitTest::GetInstance()->listeners();
  delete listeners.Release(listeners.default_result_printer());
  listeners.Append(new CriterionPrinter);
  const int rc = RUN_ALL_TESTS();
  const auto* u = ::testing::UnitTest::GetInstance();
  std::printf("%d passed, %d failed, %d skipped\n", u->successful_test_count(), u->failed_test_count(),
              u->skipped_test_count());
  return rc;
}
