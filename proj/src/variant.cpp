#include "pufauth/variant.hpp"

namespace pufauth {

std::string variant_name(ProtocolVariant v) {
  switch (v) {
    case ProtocolVariant::P21_AW: return "p21-aw";
    case ProtocolVariant::P21_FIX: return "p21-fix";
    case ProtocolVariant::P21_ENH: return "p21-enh";
    case ProtocolVariant::P22: return "p22";
    case ProtocolVariant::P22_ENH: return "p22-enh";
  }
  return "?";
}

ProtocolVariant variant_from_name(std::string_view name) {
  if (name == "p21-aw") return ProtocolVariant::P21_AW;
  if (name == "p21-fix") return ProtocolVariant::P21_FIX;
  if (name == "p21-enh") return ProtocolVariant::P21_ENH;
  if (name == "p22") return ProtocolVariant::P22;
  if (name == "p22-enh") return ProtocolVariant::P22_ENH;
  throw Error("unknown protocol variant: " + std::string(name));
}

}  // namespace pufauth
