//! Every group of order at most 16, plus S4, under short names.

use crate::group::FiniteGroup;

fn z(n: usize) -> FiniteGroup {
    FiniteGroup::cyclic(n).expect("n >= 1")
}

fn x(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup {
    FiniteGroup::direct_product(&a, &b)
}

fn meta(name: &str, m: usize, n: usize, r: usize, s: usize) -> FiniteGroup {
    FiniteGroup::metacyclic(name, m, n, r, s).expect("valid metacyclic parameters")
}

/// `(Z4 × Z2) ⋊ Z2` with the generator of Z2 acting by `action`.
fn z4z2_by_z2(name: &str, action: impl Fn(usize, usize) -> (usize, usize)) -> FiniteGroup {
    let k = x(z(4), z(2));
    let twist: Vec<usize> = (0..8)
        .map(|idx| {
            let (i, j) = action(idx / 2, idx % 2);
            i * 2 + j
        })
        .collect();
    let id: Vec<usize> = (0..8).collect();
    FiniteGroup::semidirect(&z(2), &k, &[id, twist])
        .expect("valid action")
        .with_name(name)
}

/// Catalog entries in order of group order, then name order as listed.
pub fn catalog() -> Vec<FiniteGroup> {
    let d = |n| FiniteGroup::dihedral(n).expect("n >= 2");
    vec![
        z(1),
        z(2),
        z(3),
        z(4),
        x(z(2), z(2)).with_name("Z2^2"),
        z(5),
        z(6),
        FiniteGroup::symmetric(3).expect("n <= 5"),
        z(7),
        z(8),
        x(z(4), z(2)),
        x(x(z(2), z(2)), z(2)).with_name("Z2^3"),
        d(4),
        meta("Q8", 4, 2, 3, 2),
        z(9),
        x(z(3), z(3)).with_name("Z3^2"),
        z(10),
        d(5),
        z(11),
        z(12),
        x(z(6), z(2)),
        d(6),
        FiniteGroup::alternating(4).expect("n <= 5"),
        meta("Dic3", 6, 2, 5, 3),
        z(13),
        z(14),
        d(7),
        z(15),
        z(16),
        x(z(4), z(4)),
        x(z(8), z(2)),
        x(z(4), x(z(2), z(2))).with_name("Z4xZ2^2"),
        x(x(z(2), z(2)), x(z(2), z(2))).with_name("Z2^4"),
        meta("Z4:Z4", 4, 4, 3, 0),
        meta("M16", 8, 2, 5, 0),
        d(8),
        meta("SD16", 8, 2, 3, 0),
        meta("Q16", 8, 2, 7, 4),
        x(z(2), d(4)),
        x(z(2), meta("Q8", 4, 2, 3, 2)),
        z4z2_by_z2("(Z4xZ2):Z2", |i, j| (i, (j + i) % 2)),
        z4z2_by_z2("Pauli", |i, j| ((i + 2 * j) % 4, j)),
        FiniteGroup::symmetric(4).expect("n <= 5"),
    ]
}

/// Catalog groups up to the given order.
pub fn catalog_up_to(max_order: usize) -> Vec<FiniteGroup> {
    catalog()
        .into_iter()
        .filter(|g| g.order() <= max_order)
        .collect()
}

pub fn by_name(name: &str) -> Option<FiniteGroup> {
    catalog().into_iter().find(|g| g.name() == name)
}
