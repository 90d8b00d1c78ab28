#include "augdem/core/types.hpp"

#include "augdem/core/errors.hpp"

namespace augdem {

bool is_enumerated(DemographicField field) {
    switch (field) {
        case DemographicField::Age:
        case DemographicField::Ideology:
        case DemographicField::Zone:
        case DemographicField::Education:
        case DemographicField::Sex:
            return true;
        case DemographicField::City:
        case DemographicField::State:
            return false;
    }
    return false;
}

std::string field_name(DemographicField field) {
    switch (field) {
        case DemographicField::Age: return "age";
        case DemographicField::Ideology: return "ideology";
        case DemographicField::Zone: return "zone";
        case DemographicField::Education: return "education";
        case DemographicField::Sex: return "sex";
        case DemographicField::City: return "city";
        case DemographicField::State: return "state";
    }
    return "";
}

std::optional<DemographicField> parse_field_name(const std::string& name) {
    if (name == "age") return DemographicField::Age;
    if (name == "ideology") return DemographicField::Ideology;
    if (name == "zone") return DemographicField::Zone;
    if (name == "education") return DemographicField::Education;
    if (name == "sex") return DemographicField::Sex;
    if (name == "city") return DemographicField::City;
    if (name == "state") return DemographicField::State;
    return std::nullopt;
}

const std::vector<std::string>& field_categories(DemographicField field) {
    // Report order: the first category of each pairing is the one listed
    // first in the bias tables (Liberal vs. Conservative, Young vs. Old,
    // Female vs. Male, College-educated first).
    static const std::vector<std::string> age = {"Young", "Old"};
    static const std::vector<std::string> ideology = {"Liberal", "Conservative", "Centrist"};
    static const std::vector<std::string> zone = {"Urban", "Rural"};
    static const std::vector<std::string> education = {"CollegeEducated", "NonCollegeEducated"};
    static const std::vector<std::string> sex = {"Female", "Male"};
    static const std::vector<std::string> none = {};
    switch (field) {
        case DemographicField::Age: return age;
        case DemographicField::Ideology: return ideology;
        case DemographicField::Zone: return zone;
        case DemographicField::Education: return education;
        case DemographicField::Sex: return sex;
        case DemographicField::City:
        case DemographicField::State: return none;
    }
    return none;
}

std::optional<std::string> category_of(const Demographics& d, DemographicField field) {
    switch (field) {
        case DemographicField::Age:
            if (!d.age) return std::nullopt;
            return *d.age == AgeBand::Young ? "Young" : "Old";
        case DemographicField::Ideology:
            if (!d.ideology) return std::nullopt;
            switch (*d.ideology) {
                case Ideology::Liberal: return "Liberal";
                case Ideology::Centrist: return "Centrist";
                case Ideology::Conservative: return "Conservative";
            }
            return std::nullopt;
        case DemographicField::Zone:
            if (!d.zone) return std::nullopt;
            return *d.zone == Zone::Urban ? "Urban" : "Rural";
        case DemographicField::Education:
            if (!d.education) return std::nullopt;
            return *d.education == Education::CollegeEducated ? "CollegeEducated"
                                                              : "NonCollegeEducated";
        case DemographicField::Sex:
            if (!d.sex) return std::nullopt;
            return *d.sex == Sex::Male ? "Male" : "Female";
        case DemographicField::City: return d.city;
        case DemographicField::State: return d.state;
    }
    return std::nullopt;
}

std::string comparison_display_name(const std::string& category) {
    if (category == "CollegeEducated") return "College-educated";
    if (category == "NonCollegeEducated") return "non-College ed.";
    return category;
}

}  // namespace augdem
