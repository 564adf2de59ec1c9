#![allow(dead_code)]

use chiral::families::{FamilyId, U_TEXT};
use chiral::{parse_presentation, parse_word_list, Presentation, Word};

/// Presentation, subgroup generators, expected index.
pub struct Case {
    pub text: &'static str,
    pub subgroup: &'static str,
    pub index: usize,
}

pub const CORPUS: &[Case] = &[
    Case {
        text: "gens a; rels a^7;",
        subgroup: "",
        index: 7,
    },
    Case {
        text: "gens a; rels a^12;",
        subgroup: "a^3",
        index: 3,
    },
    Case {
        text: "gens a, b; rels a^2, b^2, (a*b)^5;",
        subgroup: "",
        index: 10,
    },
    Case {
        text: "gens a, b; rels a^2, b^2, (a*b)^8;",
        subgroup: "a",
        index: 8,
    },
    Case {
        text: "gens a, b; rels a^3, b^2, (a*b)^4;",
        subgroup: "",
        index: 24,
    },
    Case {
        text: "gens a, b; rels a^2, b^3, (a*b)^5;",
        subgroup: "",
        index: 60,
    },
    Case {
        text: "gens a, b; rels a^2, b^3, (a*b)^5;",
        subgroup: "b",
        index: 20,
    },
    Case {
        text: "gens r, s; rels r^4, s^2, s*r*s*r;",
        subgroup: "",
        index: 8,
    },
    Case {
        text: "gens u, v; rels u^4, v^4, (u*v)^2, (u^2*v^2)^4;",
        subgroup: "",
        index: 128,
    },
    Case {
        text: "gens x, y; rels x^3, y^3, (x*y)^3, (x*y^-1)^3;",
        subgroup: "",
        index: 27,
    },
    Case {
        text: "gens a, b, c; rels a^2, b^2, c^2, (a*b)^3, (b*c)^3, (a*c)^2;",
        subgroup: "",
        index: 24,
    },
    Case {
        text: U_TEXT,
        subgroup: "(a*c^-1)^4, (c^-1*a)^4",
        index: 1024,
    },
    Case {
        text: U_TEXT,
        subgroup: "(b*c^-1)^4, (c^-1*b)^4",
        index: 2048,
    },
];

impl Case {
    pub fn presentation(&self) -> Presentation {
        parse_presentation(self.text).unwrap()
    }

    pub fn subgroup_words(&self) -> Vec<Word> {
        if self.subgroup.is_empty() {
            return Vec::new();
        }
        parse_word_list(self.subgroup, &self.presentation().names()).unwrap()
    }
}

pub fn lattice_subgroup(f: FamilyId, m: u64) -> Vec<Word> {
    f.extra_relators(m).to_vec()
}
