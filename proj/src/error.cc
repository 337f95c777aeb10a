// Copyright 2026 The qtail Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qtail/error.h"

std::string_view qtail::error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidConfig:
            return "INVALID_CONFIG";
        case ErrorCode::InvalidArgument:
            return "INVALID_ARGUMENT";
        case ErrorCode::UnstableModel:
            return "UNSTABLE_MODEL";
        case ErrorCode::CapExceeded:
            return "CAP_EXCEEDED";
        case ErrorCode::BufferOverflow:
            return "BUFFER_OVERFLOW";
        case ErrorCode::RateDegenerate:
            return "RATE_DEGENERATE";
        case ErrorCode::InvalidAlpha:
            return "INVALID_ALPHA";
        case ErrorCode::SeedSpaceTooLarge:
            return "SEED_SPACE_TOO_LARGE";
        case ErrorCode::InsufficientVisits:
            return "INSUFFICIENT_VISITS";
        case ErrorCode::InsufficientPrecision:
            return "INSUFFICIENT_PRECISION";
        case ErrorCode::PlanDiverged:
            return "PLAN_DIVERGED";
        case ErrorCode::Io:
            return "IO_ERROR";
    }
    return "UNKNOWN";
}
