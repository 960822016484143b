// Copyright 2026 The dsner Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "dsner/fixture.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>

#include "dsner/csv.h"
#include "dsner/digest.h"
#include "dsner/lexicon.h"
#include "dsner/rng.h"
#include "dsner/text.h"
#include "json.hpp"

namespace dsner {

namespace {

constexpr int kUnattested = -1;
constexpr int kNp = static_cast<int>(Label::kNanoparticle);
constexpr int kProp = static_cast<int>(Label::kProperty);
constexpr int kMat = static_cast<int>(Label::kMaterial);
constexpr int kEvt = static_cast<int>(Label::kEvent);
constexpr int kTech = static_cast<int>(Label::kTechnique);

struct Row {
  const char *source;  // "NPO" or "ENM"
  const char *key;
  const char *name;
  std::vector<std::string> synonyms;
  const char *parent;  // "" for roots
  int slot;            // label the forms are written under, or kUnattested
  const char *definition = "";
};

// Ontology rows. `slot` only drives corpus generation: attested rows have
// their forms written into entity slots of the given label.
std::vector<Row> Rows() {
  return {
      // Nanoparticle subtree (NPO).
      {"NPO", "NPO_1000", "nanoparticle", {"nano-particle"}, "", kNp,
       "Particle with at least one dimension between 1 and 100 nm."},
      {"NPO", "NPO_1001", "metal nanoparticle", {"metallic nanoparticle"},
       "NPO_1000", kNp},
      {"NPO", "NPO_1002", "gold nanoparticle", {"AuNP"}, "NPO_1001", kNp},
      {"NPO", "NPO_1003", "silver nanoparticle", {"AgNP"}, "NPO_1001", kNp},
      {"NPO", "NPO_1004", "platinum nanoparticle", {}, "NPO_1001", kNp},
      {"NPO", "NPO_1005", "metal oxide nanoparticle", {}, "NPO_1000",
       kUnattested},
      {"NPO", "NPO_1006", "iron oxide nanoparticle", {"magnetite nanoparticle"},
       "NPO_1005", kNp},
      {"NPO", "NPO_1007", "zinc oxide nanoparticle", {}, "NPO_1005", kNp},
      {"NPO", "NPO_1008", "titanium dioxide nanoparticle", {}, "NPO_1005", kNp},
      {"NPO", "NPO_1009", "quantum dot", {"QD"}, "NPO_1000", kNp,
       "Semiconductor nanocrystal, typically 2-10 nm."},
      {"NPO", "NPO_1010", "cadmium selenide quantum dot", {}, "NPO_1009", kNp},
      {"NPO", "NPO_1011", "nanocapsule", {}, "NPO_1000", kNp},
      {"NPO", "NPO_1012", "nanosphere", {}, "NPO_1000", kNp},
      {"NPO", "NPO_1013", "nanorod", {"nano-rod"}, "NPO_1000", kNp},
      {"NPO", "NPO_1014", "nanowire", {}, "NPO_1000", kNp},
      {"NPO", "NPO_1015", "carbon nanotube", {"CNT"}, "NPO_1000", kNp},
      {"NPO", "NPO_1016", "single-walled carbon nanotube", {}, "NPO_1015", kNp},
      {"NPO", "NPO_1017", "multi-walled carbon nanotube", {"MWCNT"},
       "NPO_1015", kNp},
      {"NPO", "NPO_1018", "nanoprism", {}, "NPO_1000", kUnattested},

      // Material subtree (NPO). Six terms are relabeled by curation.
      {"NPO", "NPO_2000", "chemical substance", {}, "", kUnattested},
      {"NPO", "NPO_2001", "metal", {}, "NPO_2000", kMat},
      {"NPO", "NPO_2002", "gold", {}, "NPO_2001", kMat},
      {"NPO", "NPO_2003", "silver", {}, "NPO_2001", kMat},
      {"NPO", "NPO_2004", "platinum", {}, "NPO_2001", kMat},
      {"NPO", "NPO_2005", "copper", {}, "NPO_2001", kMat},
      {"NPO", "NPO_2006", "iron", {}, "NPO_2001", kMat},
      {"NPO", "NPO_2007", "zinc", {}, "NPO_2001", kMat},
      {"NPO", "NPO_2008", "aluminium", {}, "NPO_2001", kMat},
      {"NPO", "NPO_2010", "metal oxide", {}, "NPO_2000", kMat},
      {"NPO", "NPO_2011", "zinc oxide", {"ZnO"}, "NPO_2010", kMat},
      {"NPO", "NPO_2012", "titanium dioxide", {"TiO2"}, "NPO_2010", kMat},
      {"NPO", "NPO_2013", "iron oxide", {}, "NPO_2010", kMat},
      {"NPO", "NPO_2014", "silica", {"silicon dioxide"}, "NPO_2010", kMat},
      {"NPO", "NPO_2020", "polymer", {}, "NPO_2000", kMat},
      {"NPO", "NPO_2021", "polyethylene glycol", {"PEG"}, "NPO_2020", kMat},
      {"NPO", "NPO_2022", "chitosan", {}, "NPO_2020", kMat},
      {"NPO", "NPO_2023", "polystyrene", {}, "NPO_2020", kMat},
      {"NPO", "NPO_2030", "carbon material", {}, "NPO_2000", kUnattested},
      {"NPO", "NPO_2031", "graphene", {}, "NPO_2030", kMat},
      {"NPO", "NPO_2032", "graphene oxide", {}, "NPO_2031", kMat},
      {"NPO", "NPO_2033", "carbon black", {}, "NPO_2030", kMat},
      {"NPO", "NPO_2034", "fullerene", {}, "NPO_2030", kNp},
      {"NPO", "NPO_2035", "buckyball", {}, "NPO_2034", kNp},
      {"NPO", "NPO_2036", "carbon dot", {}, "NPO_2030", kNp},
      {"NPO", "NPO_2040", "organic compound", {}, "NPO_2000", kUnattested},
      {"NPO", "NPO_2041", "dendrimer", {}, "NPO_2040", kNp},
      {"NPO", "NPO_2042", "liposome", {}, "NPO_2040", kNp},
      {"NPO", "NPO_2043", "sodium citrate", {}, "NPO_2040", kMat},
      {"NPO", "NPO_2044", "ethanol", {}, "NPO_2040", kMat},
      {"NPO", "NPO_2045", "toluene", {}, "NPO_2040", kMat},
      {"NPO", "NPO_2046", "surface group", {}, "NPO_2000", kNp},
      {"NPO", "NPO_2050", "cadmium selenide", {}, "NPO_2000", kMat},
      {"NPO", "NPO_2051", "sulfur", {}, "NPO_2000", kMat},
      {"NPO", "NPO_2052", "solvent", {}, "NPO_2000", kMat},
      {"NPO", "NPO_2053", "surfactant", {}, "NPO_2000", kMat},
      {"NPO", "NPO_2054", "nanomaterial", {}, "NPO_2000", kMat,
       "Material with any external dimension in the nanoscale."},

      // Event roots (NPO).
      {"NPO", "NPO_4000", "biological process", {}, "", kUnattested},
      {"NPO", "NPO_4001", "cell death", {}, "NPO_4000", kEvt},
      {"NPO", "NPO_4002", "apoptosis", {}, "NPO_4001", kEvt},
      {"NPO", "NPO_4003", "necrosis", {}, "NPO_4001", kEvt},
      {"NPO", "NPO_4004", "cell proliferation", {}, "NPO_4000", kEvt},
      {"NPO", "NPO_4005", "inflammatory response", {}, "NPO_4000", kEvt},
      {"NPO", "NPO_4006", "immune response", {}, "NPO_4000", kEvt},
      {"NPO", "NPO_4007", "oxidative stress", {}, "NPO_4000", kEvt},
      {"NPO", "NPO_4008", "lipid peroxidation", {}, "NPO_4007", kEvt},
      {"NPO", "NPO_4009", "DNA damage", {}, "NPO_4000", kEvt},
      {"NPO", "NPO_4010", "cellular uptake", {}, "NPO_4000", kEvt},
      {"NPO", "NPO_4011", "endocytosis", {}, "NPO_4010", kEvt},
      {"NPO", "NPO_4012", "phagocytosis", {}, "NPO_4010", kEvt},
      {"NPO", "NPO_4013", "hemolysis", {}, "NPO_4000", kEvt},
      {"NPO", "NPO_4014", "biodistribution", {}, "NPO_4000", kEvt},
      {"NPO", "NPO_4015", "bioaccumulation", {}, "NPO_4014", kEvt},
      {"NPO", "NPO_4016", "gene expression", {}, "NPO_4000", kEvt},
      {"NPO", "NPO_4017", "cell signaling", {}, "NPO_4000", kUnattested},
      {"NPO", "NPO_4100", "chemical reaction", {}, "", kEvt},
      {"NPO", "NPO_4101", "redox reaction", {}, "NPO_4100", kEvt},
      {"NPO", "NPO_4102", "oxidation", {}, "NPO_4101", kEvt},
      {"NPO", "NPO_4103", "photocatalysis", {}, "NPO_4100", kEvt},
      {"NPO", "NPO_4104", "dissolution", {}, "NPO_4100", kEvt},
      {"NPO", "NPO_4105", "ion release", {}, "NPO_4104", kEvt},
      {"NPO", "NPO_4200", "physical process", {}, "", kUnattested},
      {"NPO", "NPO_4201", "aggregation", {}, "NPO_4200", kEvt},
      {"NPO", "NPO_4202", "agglomeration", {}, "NPO_4201", kEvt},
      {"NPO", "NPO_4203", "nucleation", {}, "NPO_4200", kEvt},
      {"NPO", "NPO_4204", "crystal growth", {}, "NPO_4200", kEvt},
      {"NPO", "NPO_4205", "crystallization", {}, "NPO_4204", kEvt},
      {"NPO", "NPO_4206", "sedimentation", {}, "NPO_4200", kEvt},
      {"NPO", "NPO_4207", "adsorption", {}, "NPO_4200", kEvt},
      {"NPO", "NPO_4208", "phase transition", {}, "NPO_4200", kEvt},
      {"NPO", "NPO_4209", "sintering", {}, "NPO_4200", kEvt},
      {"NPO", "NPO_4210", "precipitation", {}, "NPO_4200", kEvt},

      // Technique: synthesis branch (NPO).
      {"NPO", "NPO_5500", "synthesis method", {}, "", kUnattested},
      {"NPO", "NPO_5501", "sol-gel method", {}, "NPO_5500", kTech},
      {"NPO", "NPO_5502", "hydrothermal synthesis", {}, "NPO_5500", kTech},
      {"NPO", "NPO_5503", "chemical vapor deposition", {"CVD"}, "NPO_5500",
       kTech},
      {"NPO", "NPO_5506", "sonication", {}, "NPO_5500", kTech},
      {"NPO", "NPO_5507", "ultrasonication", {}, "NPO_5506", kTech},
      {"NPO", "NPO_5508", "centrifugation", {}, "NPO_5500", kTech},

      // Outside every label subtree.
      {"NPO", "NPO_6000", "quality", {}, "", kUnattested},
      {"NPO", "NPO_6001", "shape quality", {}, "NPO_6000", kUnattested},

      // Property subtree (ENM).
      {"ENM", "ENM_3000", "physicochemical property", {}, "", kUnattested},
      {"ENM", "ENM_3001", "particle size", {}, "ENM_3000", kProp},
      {"ENM", "ENM_3002", "hydrodynamic diameter", {}, "ENM_3001", kProp},
      {"ENM", "ENM_3003", "surface area", {}, "ENM_3000", kProp},
      {"ENM", "ENM_3004", "specific surface area", {}, "ENM_3003", kProp},
      {"ENM", "ENM_3005", "zeta potential", {}, "ENM_3006", kProp},
      {"ENM", "ENM_3006", "surface charge", {}, "ENM_3000", kProp},
      {"ENM", "ENM_3007", "polydispersity index", {"PDI"}, "ENM_3001", kProp},
      {"ENM", "ENM_3010", "toxicological property", {}, "ENM_3000",
       kUnattested},
      {"ENM", "ENM_3011", "toxicity", {}, "ENM_3010", kProp},
      {"ENM", "ENM_3012", "cytotoxicity", {}, "ENM_3011", kProp},
      {"ENM", "ENM_3013", "genotoxicity", {}, "ENM_3011", kProp},
      {"ENM", "ENM_3014", "biocompatibility", {}, "ENM_3010", kProp},
      {"ENM", "ENM_3015", "biodegradability", {}, "ENM_3010", kProp},
      {"ENM", "ENM_3020", "solubility", {}, "ENM_3000", kProp},
      {"ENM", "ENM_3021", "stability", {}, "ENM_3000", kProp},
      {"ENM", "ENM_3022", "colloidal stability", {}, "ENM_3021", kProp},
      {"ENM", "ENM_3023", "hydrophobicity", {}, "ENM_3000", kProp},
      {"ENM", "ENM_3024", "hydrophilicity", {}, "ENM_3000", kProp},
      {"ENM", "ENM_3030", "magnetic property", {"magnetism"}, "ENM_3000",
       kProp},
      {"ENM", "ENM_3031", "optical property", {}, "ENM_3000", kProp},
      {"ENM", "ENM_3032", "band gap", {}, "ENM_3031", kProp},
      {"ENM", "ENM_3033", "fluorescence", {}, "ENM_3031", kProp},
      {"ENM", "ENM_3034", "photoluminescence", {}, "ENM_3033", kProp},
      {"ENM", "ENM_3035", "color", {}, "ENM_3031", kProp},
      {"ENM", "ENM_3040", "conductivity", {}, "ENM_3000", kProp},
      {"ENM", "ENM_3041", "thermal conductivity", {}, "ENM_3040", kProp},
      {"ENM", "ENM_3042", "electrical conductivity", {}, "ENM_3040", kProp},
      {"ENM", "ENM_3050", "porosity", {}, "ENM_3000", kProp},
      {"ENM", "ENM_3051", "crystallinity", {}, "ENM_3000", kProp},
      {"ENM", "ENM_3052", "molecular weight", {}, "ENM_3000", kProp},
      {"ENM", "ENM_3053", "catalytic activity", {}, "ENM_3000", kProp},
      {"ENM", "ENM_3060", "surface chemistry", {}, "ENM_3000", kUnattested},

      // Technique: characterization branch (ENM).
      {"ENM", "ENM_5000", "characterization technique", {}, "", kUnattested},
      {"ENM", "ENM_5001", "microscopy", {}, "ENM_5000", kTech},
      {"ENM", "ENM_5002", "transmission electron microscopy", {"TEM"},
       "ENM_5001", kTech},
      {"ENM", "ENM_5003", "scanning electron microscopy", {"SEM"}, "ENM_5001",
       kTech},
      {"ENM", "ENM_5004", "atomic force microscopy", {"AFM"}, "ENM_5001",
       kTech},
      {"ENM", "ENM_5010", "spectroscopy", {}, "ENM_5000", kTech},
      {"ENM", "ENM_5011", "UV-vis spectroscopy", {}, "ENM_5010", kTech},
      {"ENM", "ENM_5013", "Fourier transform infrared spectroscopy", {"FTIR"},
       "ENM_5010", kTech},
      {"ENM", "ENM_5014", "X-ray photoelectron spectroscopy", {"XPS"},
       "ENM_5010", kTech},
      {"ENM", "ENM_5020", "dynamic light scattering", {"DLS"}, "ENM_5000",
       kTech},
      {"ENM", "ENM_5021", "X-ray diffraction", {"XRD"}, "ENM_5000", kTech},
      {"ENM", "ENM_5022", "thermogravimetric analysis", {"TGA"}, "ENM_5000",
       kTech},
      {"ENM", "ENM_5030", "bioassay", {}, "ENM_5000", kUnattested},
      {"ENM", "ENM_5031", "MTT assay", {}, "ENM_5030", kTech},
      {"ENM", "ENM_5032", "cell viability assay", {}, "ENM_5030", kTech},
      {"ENM", "ENM_5033", "flow cytometry", {}, "ENM_5030", kTech},
      {"ENM", "ENM_5040", "electrochemical measurement", {}, "ENM_5000", kTech},
      {"ENM", "ENM_5041", "molecular dynamics simulation", {}, "ENM_5000",
       kTech},
      {"ENM", "ENM_5042", "density functional theory calculation", {},
       "ENM_5041", kTech},

      // ENM material branch. NPO_1009 is also placed here, and ENM_9102
      // carries a form NPO assigns to a nanoparticle concept; NPO wins both.
      {"ENM", "ENM_9000", "engineered material", {}, "", kUnattested},
      {"ENM", "NPO_1009", "quantum dot", {}, "ENM_9000", kUnattested},
      {"ENM", "ENM_9102", "carbon nanotube", {}, "ENM_9000", kUnattested},
      {"ENM", "ENM_9103", "chitosan", {}, "ENM_9000", kUnattested},
      {"ENM", "ENM_9200", "nanofiller", {}, "ENM_9999", kUnattested},
  };
}

struct Variant {
  std::string surface;  // as written; already normalized
  int label;            // final label
};

// Attested variants the ledger accepts, eight per label.
std::vector<Variant> AcceptedVariants() {
  return {
      {"nanoparticles", kNp},
      {"gold nanoparticles", kNp},
      {"silver nanoparticles", kNp},
      {"quantum dots", kNp},
      {"nanocapsules", kNp},
      {"carbon nanotubes", kNp},
      {"multiwalled carbon nanotube", kNp},
      {"dendrimers", kNp},
      {"polymers", kMat},
      {"metals", kMat},
      {"metal oxides", kMat},
      {"solvents", kMat},
      {"surfactants", kMat},
      {"nanomaterials", kMat},
      {"sulphur", kMat},
      {"aluminum", kMat},
      {"colour", kProp},
      {"magnetic properties", kProp},
      {"optical properties", kProp},
      {"zeta potentials", kProp},
      {"particle sizes", kProp},
      {"surface areas", kProp},
      {"weight of molecule", kProp},
      {"band gaps", kProp},
      {"inflammatory responses", kEvt},
      {"immune responses", kEvt},
      {"haemolysis", kEvt},
      {"crystallisation", kEvt},
      {"chemical reactions", kEvt},
      {"redox reactions", kEvt},
      {"phase transitions", kEvt},
      {"bio accumulation", kEvt},
      {"chemical vapour deposition", kTech},
      {"mtt assays", kTech},
      {"cell viability assays", kTech},
      {"molecular dynamics simulations", kTech},
      {"solgel method", kTech},
      {"ultra sonication", kTech},
      {"electrochemical measurements", kTech},
      {"density functional theory calculations", kTech},
  };
}

// Attested variants the ledger rejects; written into entity slots.
std::vector<Variant> RejectedVariants() {
  return {{"nano sphere", kNp},
          {"silicas", kMat},
          {"toxicities", kProp},
          {"oxidations", kEvt},
          {"sonications", kTech}};
}

std::vector<Variant> PlantedSynonyms() {
  return {
      {"nanocluster", kNp},       {"nanoshell", kNp},
      {"nanoplatelet", kNp},      {"nanocube", kNp},
      {"cobalt", kMat},           {"nickel", kMat},
      {"palladium", kMat},        {"polyvinyl alcohol", kMat},
      {"refractive index", kProp}, {"elasticity", kProp},
      {"roughness", kProp},       {"permeability", kProp},
      {"autophagy", kEvt},        {"ferroptosis", kEvt},
      {"corrosion", kEvt},        {"coalescence", kEvt},
      {"ellipsometry", kTech},    {"calorimetry", kTech},
      {"chromatography", kTech},  {"small-angle X-ray scattering", kTech},
  };
}

const char *const kRelabeled[] = {"buckyball", "carbon dot", "surface group",
                                  "dendrimer", "liposome",   "fullerene"};

// Slots: {N} Nanoparticle, {P} Property, {M} Material, {E} Event,
// {T} Technique.
const char *const kTemplates[] = {
    "{N} were synthesized by {T}.",
    "The {P} of the {N} was determined by {T}.",
    "{M} was used as a precursor for the preparation of {N}.",
    "Exposure to {N} induced {E} in treated cells.",
    "Significant {E} was observed after incubation with {M}.",
    "The {P} increased with the concentration of {M}.",
    "{N} coated with {M} showed enhanced {P}.",
    "Samples were characterized using {T}.",
    "We measured the {P} by {T}.",
    "{E} was detected in cells exposed to {N}.",
    "The {N} were dispersed in {M} before analysis.",
    "{T} revealed a uniform {P} across all samples.",
    "The role of {E} in the response to {M} remains unclear.",
    "Our results indicate that {N} promote {E}.",
    "The {M} content was quantified with {T}.",
    "Changes in {P} were linked to {E}.",
    "{N} capped with {M} were characterized by {T}.",
    "{N} exhibited a high {P}.",
    "A marked decrease in {E} was seen for {N}.",
    "The synthesis involved {M} and {M} as starting reagents.",
    "The morphology of the {N} was examined by {T} and {T}.",
    "{E} depends strongly on the {P} of the particles.",
    "The {N} remained dispersed in {M} for several weeks.",
    "Data from {T} confirmed the presence of {M}.",
    "{E} and {E} were both enhanced after treatment.",
    "Both {P} and {P} were evaluated for each batch.",
    "In this study, {N} loaded with {M} were tested for {E}.",
    "The effect of {M} on the {P} was assessed by {T} (see below).",
};

// Sentences without entity slots, some with generic vocabulary.
const char *const kFillers[] = {
    "The data are presented as mean values of three replicates.",
    "All experiments were repeated at least twice.",
    "Statistical significance was assessed with a two-tailed test.",
    "These findings are discussed in the following section.",
    "The authors thank the technical staff for their support.",
    "No significant difference was found between the groups.",
    "Further work is needed to clarify this point.",
    "Details are given in the supplementary information.",
    "The size of the sample holder was adjusted manually.",
    "The surface of the glass slide was cleaned with acetone.",
    "Particles were counted in ten random fields per sample.",
    "Cells were seeded at a density of 10,000 per well.",
};

constexpr double kFillerRate = 0.12;
// Weight of the rejected variants, as a Zipf rank.
constexpr double kRejectedRank = 120.0;
// Slot draws of a label that receive the planted synonyms.
constexpr size_t kPlantedFirstDraw = 50;
constexpr size_t kPlantedDrawStride = 97;

std::string Capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

struct SlotPool {
  std::vector<std::string> forms;
  std::vector<double> cumulative;

  void Add(std::string form, double weight) {
    forms.push_back(std::move(form));
    cumulative.push_back((cumulative.empty() ? 0.0 : cumulative.back()) + weight);
  }
  const std::string &Draw(Rng &rng) const {
    const double x = rng.UniformReal() * cumulative.back();
    size_t i = std::upper_bound(cumulative.begin(), cumulative.end(), x) -
               cumulative.begin();
    return forms[std::min(i, forms.size() - 1)];
  }
};

std::string OntologyCsv(const std::vector<Row> &rows, std::string_view source) {
  std::ostringstream out;
  WriteCsvRow(out, {"key", "label", "definition", "synonyms", "parent_key"});
  for (const Row &r : rows) {
    if (source != r.source) continue;
    WriteCsvRow(out, {r.key, r.name, r.definition, Join(r.synonyms, "|"),
                      r.parent});
  }
  return out.str();
}

}  // namespace

Fixture GenerateFixture(const FixtureOptions &options) {
  const std::vector<Row> rows = Rows();
  const std::vector<Variant> accepted = AcceptedVariants();
  const std::vector<Variant> rejected = RejectedVariants();
  const std::vector<Variant> planted = PlantedSynonyms();

  Fixture fx;
  fx.npo_csv = OntologyCsv(rows, "NPO");
  fx.enm_csv = OntologyCsv(rows, "ENM");
  fx.roots_jsonl =
      "{\"label\":\"Nanoparticle\",\"roots\":[\"NPO_1000\"],"
      "\"source_priority\":[\"NPO\",\"ENM\"]}\n"
      "{\"label\":\"Property\",\"roots\":[\"ENM_3000\"],"
      "\"source_priority\":[\"NPO\",\"ENM\"]}\n"
      "{\"label\":\"Material\",\"roots\":[\"NPO_2000\",\"ENM_9000\"],"
      "\"source_priority\":[\"NPO\",\"ENM\"]}\n"
      "{\"label\":\"Event\",\"roots\":[\"NPO_4000\",\"NPO_4100\",\"NPO_4200\"],"
      "\"source_priority\":[\"NPO\",\"ENM\"]}\n"
      "{\"label\":\"Technique\",\"roots\":[\"ENM_5000\",\"NPO_5500\"],"
      "\"source_priority\":[\"NPO\",\"ENM\"]}\n";

  // Written forms per label, deduplicated by normalized surface.
  std::array<std::vector<std::string>, kNumLabels> written;
  std::map<std::string, int> seen;
  auto add_written = [&](const std::string &form, int label) {
    std::string norm = Normalize(form);
    if (seen.emplace(norm, label).second) written[label].push_back(form);
  };
  for (const Row &r : rows) {
    if (r.slot == kUnattested) continue;
    add_written(r.name, r.slot);
    for (const std::string &s : r.synonyms) add_written(s, r.slot);
  }
  for (const Variant &v : accepted) add_written(v.surface, v.label);

  for (int l = 0; l < kNumLabels; ++l) {
    for (const std::string &f : written[l]) {
      fx.expected_vocabulary.push_back({Normalize(f), static_cast<Label>(l)});
    }
  }
  std::sort(fx.expected_vocabulary.begin(), fx.expected_vocabulary.end(),
            [](const FixtureTerm &a, const FixtureTerm &b) {
              return std::pair(a.label, a.surface) < std::pair(b.label, b.surface);
            });
  for (const Variant &v : planted) {
    fx.planted.push_back({Normalize(v.surface), static_cast<Label>(v.label)});
  }

  // Zipf weights over a seeded rank order of each label's written forms.
  Rng rng(options.seed);
  std::array<SlotPool, kNumLabels> pools;
  for (int l = 0; l < kNumLabels; ++l) {
    std::vector<std::string> ranked = written[l];
    rng.Shuffle(ranked);
    for (size_t r = 0; r < ranked.size(); ++r) {
      pools[l].Add(ranked[r], 1.0 / static_cast<double>(r + 1));
    }
    for (const Variant &v : rejected) {
      if (v.label == l) pools[l].Add(v.surface, 1.0 / kRejectedRank);
    }
  }

  // Each planted synonym fills exactly one slot of its label, at a fixed
  // draw index, so the tagger sees it once.
  std::array<std::map<size_t, std::string>, kNumLabels> planted_at;
  {
    std::array<size_t, kNumLabels> next{};
    for (const Variant &v : planted) {
      planted_at[v.label][kPlantedFirstDraw + kPlantedDrawStride * next[v.label]++] =
          v.surface;
    }
  }
  std::array<size_t, kNumLabels> draws{};
  const size_t num_templates = std::size(kTemplates);
  const size_t num_fillers = std::size(kFillers);
  std::ostringstream corpus;
  size_t produced = 0;
  for (size_t doc = 0; produced < options.sentences; ++doc) {
    char doc_id[32];
    std::snprintf(doc_id, sizeof(doc_id), "article-%03zu", doc + 1);
    nlohmann::ordered_json record;
    record["doc_id"] = doc_id;
    std::vector<std::string> sentences;
    for (size_t i = 0;
         i < options.sentences_per_document && produced < options.sentences;
         ++i, ++produced) {
      if (rng.UniformReal() < kFillerRate) {
        sentences.emplace_back(kFillers[rng.Uniform(num_fillers)]);
        continue;
      }
      std::string tmpl = kTemplates[rng.Uniform(num_templates)];
      std::string text;
      for (size_t p = 0; p < tmpl.size(); ++p) {
        if (tmpl[p] == '{' && p + 2 < tmpl.size() && tmpl[p + 2] == '}') {
          int label = 0;
          switch (tmpl[p + 1]) {
            case 'N': label = kNp; break;
            case 'P': label = kProp; break;
            case 'M': label = kMat; break;
            case 'E': label = kEvt; break;
            default: label = kTech; break;
          }
          std::string fill = pools[label].Draw(rng);
          auto plant = planted_at[label].find(draws[label]++);
          if (plant != planted_at[label].end()) fill = plant->second;
          text += p == 0 ? Capitalize(fill) : fill;
          p += 2;
        } else {
          text.push_back(tmpl[p]);
        }
      }
      sentences.push_back(std::move(text));
    }
    record["sentences"] = sentences;
    corpus << record.dump() << '\n';
  }
  fx.corpus_jsonl = corpus.str();

  // Curation ledger. One superseded decision exercises latest-wins.
  std::ostringstream ledger;
  int minute = 0;
  auto decide = [&](std::string surface, CurationAction action,
                    std::optional<Label> to, const char *actor) {
    CurationDecision d;
    d.surface = std::move(surface);
    d.action = action;
    d.to_label = to;
    d.actor = actor;
    char ts[32];
    std::snprintf(ts, sizeof(ts), "2026-01-15T%02d:%02d:00Z", 9 + minute / 60,
                  minute % 60);
    ++minute;
    d.timestamp = ts;
    ledger << DecisionToJsonLine(d) << '\n';
  };
  decide("nanocapsules", CurationAction::kReject, std::nullopt, "expert-2");
  for (const char *s : kRelabeled) {
    decide(s, CurationAction::kRelabel, Label::kNanoparticle, "expert-1");
  }
  for (const Variant &v : accepted) {
    decide(v.surface, CurationAction::kAccept, std::nullopt,
           v.label % 2 == 0 ? "expert-1" : "expert-3");
  }
  for (const Variant &v : rejected) {
    decide(v.surface, CurationAction::kReject, std::nullopt, "expert-2");
  }
  fx.ledger_jsonl = ledger.str();

  std::ostringstream judgments;
  for (const Variant &v : planted) {
    nlohmann::ordered_json j;
    j["surface"] = Normalize(v.surface);
    j["label"] = std::string(LabelName(static_cast<Label>(v.label)));
    j["verdict"] = "correct";
    judgments << j.dump() << '\n';
  }
  for (const Variant &v : rejected) {
    nlohmann::ordered_json j;
    j["surface"] = v.surface;
    j["label"] = std::string(LabelName(static_cast<Label>(v.label)));
    j["verdict"] = "incorrect";
    judgments << j.dump() << '\n';
  }
  fx.judgments_jsonl = judgments.str();
  return fx;
}

void WriteFixture(const Fixture &fixture, const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  WriteFile(dir / kFixtureCorpus, fixture.corpus_jsonl);
  WriteFile(dir / kFixtureNpo, fixture.npo_csv);
  WriteFile(dir / kFixtureEnm, fixture.enm_csv);
  WriteFile(dir / kFixtureRoots, fixture.roots_jsonl);
  WriteFile(dir / kFixtureLedger, fixture.ledger_jsonl);
  WriteFile(dir / kFixtureJudgments, fixture.judgments_jsonl);
}

}  // namespace dsner
