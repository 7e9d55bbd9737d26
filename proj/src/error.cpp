// SPDX-License-Identifier: Apache-2.0

#include <ctxsearch/error.hpp>

namespace ctxsearch {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::MalformedUrl: return "MalformedUrl";
    case ErrorCode::NotAStackTrace: return "NotAStackTrace";
    case ErrorCode::InvalidQuery: return "InvalidQuery";
    case ErrorCode::ProviderTimeout: return "ProviderTimeout";
    case ErrorCode::ProviderAuth: return "ProviderAuth";
    case ErrorCode::ProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::EmptyCalibration: return "EmptyCalibration";
    case ErrorCode::UnknownProvider: return "UnknownProvider";
    case ErrorCode::NoProvidersAvailable: return "NoProvidersAvailable";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::CorruptRecord: return "CorruptRecord";
    case ErrorCode::MissingRun: return "MissingRun";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

} // namespace ctxsearch
