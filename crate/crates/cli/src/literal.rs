//! Element literals such as `[C_S1]*[C*_(2,1)]*K_(1,0)` or `[S]*k_(1)`.

use hallforge::double::{Double, HeElt};
use hallforge::heredcat::{ClassId, HereditaryCategory, K0Class};
use hallforge::mrh::{Mrh, MrhElt};
use hallforge::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassRef {
    Zero,
    Simple(usize),
    Id(u32),
    Label(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    Plus(ClassRef),
    Minus(ClassRef),
    K(Vec<i64>),
    KStar(Vec<i64>),
    He(ClassRef),
    HeK(Vec<i64>),
}

impl Factor {
    fn is_he(&self) -> bool {
        matches!(self, Factor::He(_) | Factor::HeK(_))
    }
}

/// A literal evaluated in one of the two algebras.
#[derive(Debug, Clone)]
pub enum Element {
    Mrh(MrhElt),
    He(HeElt),
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {tok:?}")))
        }
    }

    fn error(&self, what: &str) -> Error {
        Error::Invalid(format!("{what} at offset {} in {:?}", self.pos, self.src))
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let r = self.rest();
        let len = r
            .char_indices()
            .take_while(|&(i, c)| c.is_ascii_digit() || (i == 0 && c == '-'))
            .map(|(i, c)| i + c.len_utf8())
            .last()
            .unwrap_or(0);
        let n = r[..len].parse().map_err(|_| self.error("expected an integer"))?;
        self.pos += len;
        Ok(n)
    }

    fn vector(&mut self) -> Result<Vec<i64>> {
        if !self.eat("(") {
            return Ok(vec![self.int()?]);
        }
        let mut out = vec![self.int()?];
        while self.eat(",") {
            out.push(self.int()?);
        }
        self.expect(")")?;
        Ok(out)
    }

    fn class_ref(&mut self) -> Result<ClassRef> {
        self.skip_ws();
        if self.rest().starts_with('(') {
            let parts = self.vector()?;
            let strs: Vec<String> = parts.iter().map(i64::to_string).collect();
            return Ok(ClassRef::Label(format!("({})", strs.join(","))));
        }
        if self.eat("#") {
            return Ok(ClassRef::Id(self.unsigned()?));
        }
        if self.eat("S") {
            let starts_digit = self.rest().starts_with(|c: char| c.is_ascii_digit());
            if !starts_digit {
                return Ok(ClassRef::Simple(1));
            }
            return Ok(ClassRef::Simple(self.unsigned()? as usize));
        }
        match self.unsigned()? {
            0 => Ok(ClassRef::Zero),
            n => Ok(ClassRef::Id(n)),
        }
    }

    fn unsigned(&mut self) -> Result<u32> {
        let n = self.int()?;
        u32::try_from(n).map_err(|_| self.error("expected a non-negative integer"))
    }

    fn factor(&mut self) -> Result<Factor> {
        if self.eat("[") {
            let f = if self.eat("C*_") {
                Factor::Minus(self.class_ref()?)
            } else if self.eat("C_") {
                Factor::Plus(self.class_ref()?)
            } else {
                Factor::He(self.class_ref()?)
            };
            self.expect("]")?;
            return Ok(f);
        }
        if self.eat("K*_") {
            return Ok(Factor::KStar(self.vector()?));
        }
        if self.eat("K_") {
            return Ok(Factor::K(self.vector()?));
        }
        if self.eat("k_") {
            return Ok(Factor::HeK(self.vector()?));
        }
        Err(self.error("expected a factor"))
    }
}

pub fn parse(src: &str) -> Result<Vec<Factor>> {
    let mut c = Cursor { src, pos: 0 };
    let mut out = vec![c.factor()?];
    while c.eat("*") {
        out.push(c.factor()?);
    }
    c.skip_ws();
    if !c.rest().is_empty() {
        return Err(c.error("trailing input"));
    }
    Ok(out)
}

pub fn resolve(cat: &dyn HereditaryCategory, r: &ClassRef) -> Result<ClassId> {
    match r {
        ClassRef::Zero => Ok(ClassId::ZERO),
        ClassRef::Simple(i) => {
            if *i == 0 || *i > cat.n() {
                return Err(Error::Invalid(format!("simple S{i} is out of range 1..={}", cat.n())));
            }
            cat.simple(i - 1)
        }
        ClassRef::Id(id) => cat.class(ClassId(*id)).map(|c| c.id),
        ClassRef::Label(label) => {
            let size: i64 =
                label.trim_matches(|c| c == '(' || c == ')').split(',').filter_map(|p| p.parse::<i64>().ok()).sum();
            let ids = cat.classes_up_to(size.max(0) as usize)?;
            ids.into_iter()
                .find(|&id| cat.class(id).map(|c| &c.label == label).unwrap_or(false))
                .ok_or_else(|| Error::Invalid(format!("no class labelled {label}")))
        }
    }
}

fn k0(cat: &dyn HereditaryCategory, v: &[i64]) -> Result<K0Class> {
    if v.len() != cat.n() {
        return Err(Error::Invalid(format!("K0 vector {v:?} needs {} entries", cat.n())));
    }
    Ok(K0Class::new(v.to_vec()))
}

/// Evaluates a parsed literal as a product of its factors.
pub fn evaluate(double: &Double, factors: &[Factor]) -> Result<Element> {
    let cat = double.category().as_ref();
    let mrh: &Mrh = double.mrh();
    if factors.iter().all(Factor::is_he) {
        let mut acc = double.unit();
        for f in factors {
            let x = match f {
                Factor::He(r) => double.class(resolve(cat, r)?)?,
                Factor::HeK(v) => double.k(k0(cat, v)?)?,
                _ => unreachable!(),
            };
            acc = double.he_mul(&acc, &x)?;
        }
        return Ok(Element::He(acc));
    }
    if factors.iter().any(Factor::is_he) {
        return Err(Error::Invalid("literal mixes [A]/k_ factors with [C_A]/K_ factors".into()));
    }
    let zero = K0Class::zero(cat.n());
    let mut acc = mrh.unit();
    for f in factors {
        let x = match f {
            Factor::Plus(r) => mrh.iplus(resolve(cat, r)?)?,
            Factor::Minus(r) => mrh.iminus(resolve(cat, r)?)?,
            Factor::K(v) => mrh.torus(k0(cat, v)?, zero.clone())?,
            Factor::KStar(v) => mrh.torus(zero.clone(), k0(cat, v)?)?,
            _ => unreachable!(),
        };
        acc = mrh.mul(&acc, &x)?;
    }
    Ok(Element::Mrh(acc))
}

pub fn multiply(double: &Double, x: &Element, y: &Element) -> Result<Element> {
    match (x, y) {
        (Element::Mrh(a), Element::Mrh(b)) => Ok(Element::Mrh(double.mrh().mul(a, b)?)),
        (Element::He(a), Element::He(b)) => Ok(Element::He(double.he_mul(a, b)?)),
        _ => Err(Error::Invalid("operands live in different algebras".into())),
    }
}
