#include "mailscope/error.hpp"

namespace mailscope {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnreadableStream: return "UnreadableStream";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::InvalidAddress: return "InvalidAddress";
    case ErrorCode::EmptyPool: return "EmptyPool";
    case ErrorCode::UnknownFormat: return "UnknownFormat";
    case ErrorCode::UnknownDoc: return "UnknownDoc";
    case ErrorCode::DuplicateDocId: return "DuplicateDocId";
    case ErrorCode::InvalidFilter: return "InvalidFilter";
    case ErrorCode::DuplicateFilter: return "DuplicateFilter";
    case ErrorCode::UnknownFilter: return "UnknownFilter";
    case ErrorCode::DatasetMismatch: return "DatasetMismatch";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::MalformedLog: return "MalformedLog";
    case ErrorCode::ReplayDivergence: return "ReplayDivergence";
    case ErrorCode::EmptyResults: return "EmptyResults";
    case ErrorCode::EmptyLabel: return "EmptyLabel";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::UnknownEdge: return "UnknownEdge";
    case ErrorCode::EmptyUndoStack: return "EmptyUndoStack";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ClusterCapExceeded: return "ClusterCapExceeded";
    case ErrorCode::UnknownDataset: return "UnknownDataset";
    case ErrorCode::StorageFailure: return "StorageFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace mailscope
