//! Unary (Peano) naturals, kept alongside the machine-integer forms so
//! the pattern-matching definitions can be checked against them.

/// A natural number in unary representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Nat {
    Z,
    S(Box<Nat>),
}

impl Nat {
    pub fn succ(self) -> Nat {
        Nat::S(Box::new(self))
    }
}

impl From<u64> for Nat {
    fn from(mut n: u64) -> Nat {
        let mut out = Nat::Z;
        while n > 0 {
            out = out.succ();
            n -= 1;
        }
        out
    }
}

impl From<&Nat> for u64 {
    fn from(n: &Nat) -> u64 {
        let mut count = 0;
        let mut cur = n;
        while let Nat::S(inner) = cur {
            count += 1;
            cur = inner;
        }
        count
    }
}

pub fn add(a: &Nat, b: &Nat) -> Nat {
    match a {
        Nat::Z => b.clone(),
        Nat::S(x) => add(x, b).succ(),
    }
}

/// double x = x + x
pub fn double_nat(x: &Nat) -> Nat {
    add(x, x)
}

pub fn even_nat(x: &Nat) -> bool {
    match x {
        Nat::Z => true,
        Nat::S(inner) => match inner.as_ref() {
            Nat::Z => false,
            Nat::S(y) => even_nat(y),
        },
    }
}

pub fn double_int(x: u64) -> u64 {
    x + x
}

pub fn even_int(x: u64) -> bool {
    x % 2 == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversion_round_trips() {
        for n in 0..200u64 {
            let nat = Nat::from(n);
            assert_eq!(u64::from(&nat), n);
        }
    }

    #[test]
    fn double_and_even_basics() {
        assert_eq!(double_nat(&Nat::from(0)), Nat::from(0));
        assert_eq!(double_nat(&Nat::from(3)), Nat::from(6));
        assert!(even_nat(&Nat::Z));
        assert!(!even_nat(&Nat::from(1)));
        assert!(even_nat(&Nat::from(2)));
    }

    #[test]
    fn unary_and_integer_forms_agree() {
        for n in 0..200u64 {
            let nat = Nat::from(n);
            assert_eq!(u64::from(&double_nat(&nat)), double_int(n));
            assert_eq!(even_nat(&nat), even_int(n));
        }
    }

    #[test]
    fn even_double_is_true() {
        for n in 0..1000u64 {
            assert!(even_int(double_int(n)));
        }
        for n in 0..100u64 {
            assert!(even_nat(&double_nat(&Nat::from(n))));
        }
    }
}
