// Copyright 2026 The fermicorr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace fermicorr {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace fermicorr
