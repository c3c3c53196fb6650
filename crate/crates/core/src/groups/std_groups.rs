//! Frequently used marked groups.

use super::element::Element;
use super::group::Group;
use super::marked::{Family, MarkedGroup};
use super::matrix::{is_prime, Matrix};
use super::perm::Perm;
use crate::error::{Error, Result};

/// (Z/n; 1), or (Z; 1) for `None`.
pub fn cyclic(n: Option<u64>) -> Result<MarkedGroup> {
    let name = match n {
        Some(n) => format!("Z/{n}"),
        None => "Z".to_string(),
    };
    let mg = MarkedGroup::new(
        Group::Cyclic { order: n },
        vec![Element::Int(1 % n.unwrap_or(2) as i64)],
        name,
    )?;
    Ok(match n {
        Some(n) => mg.with_family(Family::Cyclic { n }),
        None => mg,
    })
}

/// (Z^d; e_1, …, e_d).
pub fn free_abelian(d: usize) -> Result<MarkedGroup> {
    let marking = (0..d)
        .map(|i| {
            let mut v = vec![0; d];
            v[i] = 1;
            Element::Vector(v)
        })
        .collect();
    MarkedGroup::new(Group::FreeAbelian { rank: d }, marking, format!("Z^{d}"))
}

fn cycle(n: usize, pts: impl Iterator<Item = u32>) -> Perm {
    let c: Vec<u32> = pts.collect();
    Perm::from_cycles(n, &[&c]).expect("valid cycle")
}

/// (Sym(n); (0 1), (0 1 … n-1)).
pub fn symmetric(n: usize) -> Result<MarkedGroup> {
    if n < 2 {
        return Err(Error::InvalidInput("Sym(n) needs n >= 2".into()));
    }
    let marking = vec![
        Element::Perm(cycle(n, 0..2)),
        Element::Perm(cycle(n, 0..n as u32)),
    ];
    Ok(
        MarkedGroup::new(Group::Perm { degree: n }, marking, format!("Sym({n})"))?
            .with_family(Family::Symmetric { n }),
    )
}

/// (Alt(n); (0 1 2), long cycle) with the long cycle chosen to be even.
pub fn alternating(n: usize) -> Result<MarkedGroup> {
    if n < 3 {
        return Err(Error::InvalidInput("Alt(n) needs n >= 3".into()));
    }
    let long = if n % 2 == 1 {
        cycle(n, 0..n as u32)
    } else {
        cycle(n, 1..n as u32)
    };
    let marking = vec![Element::Perm(cycle(n, 0..3)), Element::Perm(long)];
    Ok(
        MarkedGroup::new(Group::Perm { degree: n }, marking, format!("Alt({n})"))?
            .with_family(Family::Alternating { n }),
    )
}

/// (SL(2, p); e12, e21).
pub fn sl2(p: u32) -> Result<MarkedGroup> {
    if !is_prime(p as u64) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    let marking = vec![
        Element::Matrix(Matrix::elementary(2, 0, 1, 1, p)),
        Element::Matrix(Matrix::elementary(2, 1, 0, 1, p)),
    ];
    Ok(
        MarkedGroup::new(Group::Matrix { n: 2, p }, marking, format!("SL(2,{p})"))?
            .with_family(Family::SpecialLinear { n: 2, p: p as u64 }),
    )
}

/// Direct product of finite cyclic groups marked by the unit of each factor.
pub fn cyclic_product(orders: &[u64]) -> Result<MarkedGroup> {
    let group = Group::Product(orders.iter().map(|&n| Group::cyclic(n)).collect());
    let marking = (0..orders.len())
        .map(|i| {
            Element::Tuple(
                (0..orders.len())
                    .map(|j| Element::Int(i64::from(i == j) % orders[j] as i64))
                    .collect(),
            )
        })
        .collect();
    let name = orders
        .iter()
        .map(|n| format!("Z/{n}"))
        .collect::<Vec<_>>()
        .join(" x ");
    MarkedGroup::new(group, marking, name)
}
