//! Standard vocabulary namespaces used across the toolkit.

use crate::term::Iri;

fn iri(text: &str) -> Iri {
    Iri::new(text).expect("static IRI is valid")
}

pub mod rdf {
    use super::iri;
    use crate::term::Iri;

    pub const NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
    pub const TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
    pub const VALUE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#value";

    pub fn type_() -> Iri {
        iri(TYPE)
    }
    pub fn lang_string() -> Iri {
        iri(LANG_STRING)
    }
    pub fn value() -> Iri {
        iri(VALUE)
    }
}

pub mod rdfs {
    use super::iri;
    use crate::term::Iri;

    pub const NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
    pub const SUB_CLASS_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
    pub const DOMAIN: &str = "http://www.w3.org/2000/01/rdf-schema#domain";
    pub const RANGE: &str = "http://www.w3.org/2000/01/rdf-schema#range";

    pub fn sub_class_of() -> Iri {
        iri(SUB_CLASS_OF)
    }
    pub fn domain() -> Iri {
        iri(DOMAIN)
    }
    pub fn range() -> Iri {
        iri(RANGE)
    }
}

pub mod owl {
    use super::iri;
    use crate::term::Iri;

    pub const NS: &str = "http://www.w3.org/2002/07/owl#";
    pub const CLASS: &str = "http://www.w3.org/2002/07/owl#Class";
    pub const OBJECT_PROPERTY: &str = "http://www.w3.org/2002/07/owl#ObjectProperty";
    pub const DATATYPE_PROPERTY: &str = "http://www.w3.org/2002/07/owl#DatatypeProperty";
    pub const EQUIVALENT_CLASS: &str = "http://www.w3.org/2002/07/owl#equivalentClass";

    pub fn class() -> Iri {
        iri(CLASS)
    }
    pub fn equivalent_class() -> Iri {
        iri(EQUIVALENT_CLASS)
    }
}

pub mod xsd {
    use super::iri;
    use crate::term::Iri;

    pub const NS: &str = "http://www.w3.org/2001/XMLSchema#";
    pub const STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
    pub const INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
    pub const DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
    pub const BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";

    pub fn string() -> Iri {
        iri(STRING)
    }
    pub fn integer() -> Iri {
        iri(INTEGER)
    }
    pub fn decimal() -> Iri {
        iri(DECIMAL)
    }
    pub fn boolean() -> Iri {
        iri(BOOLEAN)
    }
}

pub mod sh {
    pub const NS: &str = "http://www.w3.org/ns/shacl#";

    pub fn term(local: &str) -> crate::term::Iri {
        super::iri(&format!("{NS}{local}"))
    }
}

/// Prefix bindings every toolkit document may use without declaring them.
pub fn standard_prefixes() -> [(&'static str, &'static str); 5] {
    [
        ("owl", owl::NS),
        ("rdf", rdf::NS),
        ("rdfs", rdfs::NS),
        ("sh", sh::NS),
        ("xsd", xsd::NS),
    ]
}
