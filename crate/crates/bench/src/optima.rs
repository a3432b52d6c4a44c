//! Best known tour lengths of the standard benchmark instances.

const KNOWN: [(&str, u64); 13] = [
    ("a280", 2579),
    ("att48", 10628),
    ("berlin52", 7542),
    ("bier127", 118282),
    ("ch130", 6110),
    ("eil51", 426),
    ("kroA100", 21282),
    ("pr76", 108159),
    ("pr144", 58537),
    ("u159", 42080),
    ("rat783", 8806),
    ("brd14051", 469385),
    ("usa13509", 19982859),
];

/// The full benchmark set, in report column order.
pub fn benchmark_names() -> impl Iterator<Item = &'static str> {
    KNOWN.iter().map(|&(name, _)| name)
}

pub fn known_optimum(instance: &str) -> Option<u64> {
    KNOWN
        .iter()
        .find(|&&(name, _)| name == instance)
        .map(|&(_, len)| len)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup() {
        assert_eq!(known_optimum("eil51"), Some(426));
        assert_eq!(known_optimum("berlin52"), Some(7542));
        assert_eq!(known_optimum("nope"), None);
        assert_eq!(benchmark_names().count(), 13);
    }
}
