#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mailscope {

// Every failure surfaced by the library carries one of these codes. The
// service maps each code to exactly one HTTP status.
enum class ErrorCode {
  // ingest
  UnreadableStream,
  EmptyCorpus,
  MissingColumn,
  InvalidAddress,
  EmptyPool,
  UnknownFormat,
  // textindex
  UnknownDoc,
  DuplicateDocId,
  // query / session
  InvalidFilter,
  DuplicateFilter,
  UnknownFilter,
  DatasetMismatch,
  UnknownSession,
  MalformedLog,
  ReplayDivergence,
  // entities
  EmptyResults,
  EmptyLabel,
  // graph
  UnknownNode,
  UnknownEdge,
  EmptyUndoStack,
  // cluster
  InvalidK,
  IndexOutOfRange,
  ClusterCapExceeded,
  // store / service
  UnknownDataset,
  StorageFailure,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace mailscope
