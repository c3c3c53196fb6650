use super::element::Element;
use super::group::Group;
use crate::error::Result;
use std::collections::HashSet;

/// Outcome of a closure computation; hitting the cap is a value, not an error.
#[derive(Clone, Debug)]
pub enum Closure {
    Complete(Vec<Element>),
    CapExceeded { discovered: usize },
}

impl Closure {
    pub fn elements(&self) -> Option<&[Element]> {
        match self {
            Closure::Complete(v) => Some(v),
            Closure::CapExceeded { .. } => None,
        }
    }

    pub fn len(&self) -> Option<usize> {
        self.elements().map(<[Element]>::len)
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Breadth-first closure of `gens` under right multiplication. Elements come
/// out in shortlex order of their first word; generators of finite order make
/// inverses unnecessary.
pub fn enumerate_subgroup(group: &Group, gens: &[Element], cap: usize) -> Result<Closure> {
    let id = group.identity();
    let mut seen: HashSet<Element> = HashSet::new();
    seen.insert(id.clone());
    let mut out = vec![id];
    let mut head = 0;
    while head < out.len() {
        let g = out[head].clone();
        head += 1;
        for s in gens {
            let h = group.mul(&g, s)?;
            if !seen.contains(&h) {
                if out.len() >= cap {
                    return Ok(Closure::CapExceeded {
                        discovered: out.len() + 1,
                    });
                }
                seen.insert(h.clone());
                out.push(h);
            }
        }
    }
    Ok(Closure::Complete(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::perm::Perm;

    #[test]
    fn sym3_closure() {
        let g = Group::Perm { degree: 3 };
        let gens = [
            Element::Perm(Perm::from_cycles(3, &[&[0, 1]]).unwrap()),
            Element::Perm(Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap()),
        ];
        assert_eq!(enumerate_subgroup(&g, &gens, 100).unwrap().len(), Some(6));
        assert_eq!(enumerate_subgroup(&g, &[], 100).unwrap().len(), Some(1));
        assert!(matches!(
            enumerate_subgroup(&g, &gens, 4).unwrap(),
            Closure::CapExceeded { .. }
        ));
    }
}
