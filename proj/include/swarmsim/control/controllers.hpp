#pragma once

#include <cstdint>
#include <memory>

#include "swarmsim/core/types.hpp"

namespace swarmsim {

/// Milling rule: drive forward at v; steer left (+omega, counterclockwise)
/// when something is seen, right (-omega) otherwise.
inline ControlCommand mill_controller(int y, double v, double omega) {
    return {v, y == 1 ? omega : -omega};
}

/// Memoryless sensing-to-action policy. Takes (agent id, y, tick) so
/// stateful controllers can slot in later; the shipped ones ignore id and
/// tick.
class Controller {
public:
    virtual ~Controller() = default;
    virtual ControlCommand command(int agent_id, int y, std::uint64_t tick) const = 0;
};

class MillController final : public Controller {
public:
    MillController(double v, double omega) : v_(v), omega_(omega) {}
    ControlCommand command(int, int y, std::uint64_t) const override {
        return mill_controller(y, v_, omega_);
    }

private:
    double v_;
    double omega_;
};

/// Maps y=0 / y=1 to fixed commands; with equal entries this is a constant
/// controller.
class TableController final : public Controller {
public:
    TableController(ControlCommand on_zero, ControlCommand on_one)
        : cmd_{on_zero, on_one} {}
    ControlCommand command(int, int y, std::uint64_t) const override {
        return cmd_[y == 1 ? 1 : 0];
    }

private:
    ControlCommand cmd_[2];
};

inline std::unique_ptr<Controller> make_controller(const ControllerSpec& spec,
                                                   double v, double omega) {
    switch (spec.kind) {
        case ControllerSpec::Kind::Constant:
            return std::make_unique<TableController>(spec.on_zero, spec.on_zero);
        case ControllerSpec::Kind::Table:
            return std::make_unique<TableController>(spec.on_zero, spec.on_one);
        case ControllerSpec::Kind::Mill:
        default:
            return std::make_unique<MillController>(v, omega);
    }
}

}  // namespace swarmsim
