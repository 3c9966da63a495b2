#pragma once

#include "swellkit/mask_set.hpp"

#include <cstdint>
#include <string>

namespace swellkit {

/// Environment variable holding the default sidecar endpoint.
inline constexpr const char* kSamEndpointEnv = "SWELLKIT_SAM_ENDPOINT";

struct SamClientOptions {
    std::string endpoint; // "http://host:port" with optional path prefix
    int timeout_ms = 30000;
    int retries = 2;
};

/// Blocking client for the segmentation sidecar.
///
///   POST {prefix}/v1/segment  {"image_id": str, "png_base64": str}
///     -> 200 {"image_id", "width", "height", "masks": [...]} (+ optional "metadata")
///   GET  {prefix}/v1/health   -> 200 {"status": "ok", ...}
///
/// Connection failures and 5xx replies are retried `retries` times, then raise
/// TransportError. Any other non-200 reply or a malformed body raises
/// ProtocolError; a body that breaks a MaskSet invariant raises ValidationError.
/// Each call opens its own connection, so one client per worker is safe.
class SamClient {
  public:
    explicit SamClient(SamClientOptions options);

    MaskSet segment(const NightImage& image, const std::string& image_id) const;

    /// True when /v1/health answers 200 with status "ok".
    bool healthy() const;

    const SamClientOptions& options() const { return options_; }

  private:
    SamClientOptions options_;
    std::string origin_;
    std::string prefix_;
};

MaskSet fetch_masks(const std::string& endpoint, const NightImage& image, const std::string& image_id,
                    int timeout_ms, int retries);

} // namespace swellkit
