#pragma once

#include <memory>
#include <thread>

#include "raise/sim/world.hpp"

namespace raise::sim {

/// HTTP stand-in serving all five backend endpoints over one port, honoring
/// the wire protocols in docs/backend_protocol.md bit-for-bit.
class SimServer {
public:
    SimServer(WorldSpec spec, int k_min);
    ~SimServer();

    /// Binds 127.0.0.1 on the given port (0 picks a free port) and serves in
    /// a background thread. Returns the bound port.
    int start(int port = 0);
    void stop();
    int port() const { return port_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::thread thread_;
    int port_ = 0;
};

}  // namespace raise::sim
