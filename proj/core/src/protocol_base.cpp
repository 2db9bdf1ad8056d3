#include "shardsim/protocol_base.hpp"

namespace shardsim {

const char* to_string(Protocol p) {
    switch (p) {
        case Protocol::Sbac: return "sbac";
        case Protocol::Atomix: return "atomix";
        case Protocol::Byzcuit: return "byzcuit";
    }
    return "?";
}

std::optional<Protocol> protocol_from_string(const std::string& s) {
    if (s == "sbac") return Protocol::Sbac;
    if (s == "atomix") return Protocol::Atomix;
    if (s == "byzcuit") return Protocol::Byzcuit;
    return std::nullopt;
}

}  // namespace shardsim
