#include "swellkit/sam_client.hpp"

#include "swellkit/base64.hpp"
#include "swellkit/errors.hpp"
#include "swellkit/image_io.hpp"

#include <httplib.h>

#include <chrono>
#include <thread>

namespace swellkit {

namespace {

std::unique_ptr<httplib::Client> make_client(const std::string& origin, int timeout_ms) {
    auto client = std::make_unique<httplib::Client>(origin);
    const auto sec = timeout_ms / 1000;
    const auto usec = (timeout_ms % 1000) * 1000;
    client->set_connection_timeout(sec, usec);
    client->set_read_timeout(sec, usec);
    client->set_write_timeout(sec, usec);
    return client;
}

} // namespace

SamClient::SamClient(SamClientOptions options) : options_(std::move(options)) {
    const std::string& ep = options_.endpoint;
    const std::string scheme = "http://";
    if (ep.rfind(scheme, 0) != 0) {
        throw InvalidArgument("sidecar endpoint must start with http:// (got '" + ep + "')");
    }
    const auto slash = ep.find('/', scheme.size());
    origin_ = ep.substr(0, slash);
    if (slash != std::string::npos) {
        prefix_ = ep.substr(slash);
        while (!prefix_.empty() && prefix_.back() == '/') {
            prefix_.pop_back();
        }
    }
    if (origin_.size() == scheme.size()) {
        throw InvalidArgument("sidecar endpoint has no host");
    }
    if (options_.timeout_ms <= 0 || options_.retries < 0) {
        throw InvalidArgument("timeout must be positive and retries non-negative");
    }
}

MaskSet SamClient::segment(const NightImage& image, const std::string& image_id) const {
    nlohmann::json request;
    request["image_id"] = image_id;
    request["png_base64"] = base64_encode(encode_png(image));
    const std::string body = request.dump();

    std::string last_failure;
    for (int attempt = 0; attempt <= options_.retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(50 * attempt));
        }
        auto client = make_client(origin_, options_.timeout_ms);
        auto res = client->Post(prefix_ + "/v1/segment", body, "application/json");
        if (!res) {
            last_failure = httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_failure = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            throw ProtocolError("sidecar replied HTTP " + std::to_string(res->status) + " for '" + image_id + "'");
        }

        MaskSet set;
        try {
            set = mask_set_from_json(nlohmann::json::parse(res->body));
        } catch (const nlohmann::json::exception& e) {
            throw ProtocolError(std::string("sidecar response is not valid JSON: ") + e.what());
        } catch (const SchemaError& e) {
            throw ProtocolError(std::string("sidecar response has wrong shape: ") + e.what());
        }
        if (set.image_id != image_id) {
            throw ProtocolError("sidecar answered for '" + set.image_id + "' instead of '" + image_id + "'");
        }
        if (set.width != image.width() || set.height != image.height()) {
            throw ValidationError("sidecar mask dimensions differ from image '" + image_id + "'");
        }
        validate_mask_set(set);
        return set;
    }
    throw TransportError("sidecar at " + options_.endpoint + " unreachable after " +
                         std::to_string(options_.retries + 1) + " attempt(s): " + last_failure);
}

bool SamClient::healthy() const {
    auto client = make_client(origin_, options_.timeout_ms);
    auto res = client->Get(prefix_ + "/v1/health");
    if (!res || res->status != 200) {
        return false;
    }
    auto doc = nlohmann::json::parse(res->body, nullptr, false);
    return doc.is_object() && doc.value("status", "") == "ok";
}

MaskSet fetch_masks(const std::string& endpoint, const NightImage& image, const std::string& image_id,
                    int timeout_ms, int retries) {
    return SamClient({endpoint, timeout_ms, retries}).segment(image, image_id);
}

} // namespace swellkit
