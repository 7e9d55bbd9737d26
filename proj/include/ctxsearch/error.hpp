// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ctxsearch {

enum class ErrorCode {
    MalformedUrl,
    NotAStackTrace,
    InvalidQuery,
    ProviderTimeout,
    ProviderAuth,
    ProviderUnavailable,
    EmptyCalibration,
    UnknownProvider,
    NoProvidersAvailable,
    IoFailure,
    NotFound,
    CorruptRecord,
    MissingRun,
    InvalidConfig,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace ctxsearch
