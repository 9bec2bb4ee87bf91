use std::fmt;

use super::IlpError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    Integer { lo: i64, hi: i64 },
}

impl VarKind {
    pub fn bounds(self) -> (i64, i64) {
        match self {
            VarKind::Binary => (0, 1),
            VarKind::Integer { lo, hi } => (lo, hi),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        })
    }
}

/// `Σ coef·var  (≤ | ≥ | =)  rhs` with integer data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub name: String,
    pub terms: Vec<(i64, VarId)>,
    pub sense: Sense,
    pub rhs: i64,
}

impl LinearConstraint {
    pub fn new(name: impl Into<String>, terms: Vec<(i64, VarId)>, sense: Sense, rhs: i64) -> Self {
        LinearConstraint {
            name: name.into(),
            terms,
            sense,
            rhs,
        }
    }

    pub fn activity(&self, values: &[i64]) -> i64 {
        self.terms.iter().map(|&(a, v)| a * values[v.0]).sum()
    }

    pub fn is_satisfied(&self, values: &[i64]) -> bool {
        let act = self.activity(values);
        match self.sense {
            Sense::Le => act <= self.rhs,
            Sense::Ge => act >= self.rhs,
            Sense::Eq => act == self.rhs,
        }
    }
}

/// A pure feasibility model over binary and bounded integer variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IlpModel {
    pub name: String,
    vars: Vec<Variable>,
    constraints: Vec<LinearConstraint>,
}

impl IlpModel {
    pub fn new(name: impl Into<String>) -> Self {
        IlpModel {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn add_binary(&mut self, name: impl Into<String>) -> VarId {
        self.vars.push(Variable {
            name: name.into(),
            kind: VarKind::Binary,
        });
        VarId(self.vars.len() - 1)
    }

    pub fn add_integer(
        &mut self,
        name: impl Into<String>,
        lo: i64,
        hi: i64,
    ) -> Result<VarId, IlpError> {
        let name = name.into();
        if lo > hi {
            return Err(IlpError::Malformed(format!(
                "variable {name} has bounds {lo} > {hi}"
            )));
        }
        self.vars.push(Variable {
            name,
            kind: VarKind::Integer { lo, hi },
        });
        Ok(VarId(self.vars.len() - 1))
    }

    pub fn add_constraint(&mut self, c: LinearConstraint) -> Result<(), IlpError> {
        self.check_constraint(&c)?;
        self.constraints.push(c);
        Ok(())
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn var(&self, v: VarId) -> &Variable {
        &self.vars[v.0]
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn num_binaries(&self) -> usize {
        self.vars
            .iter()
            .filter(|v| v.kind == VarKind::Binary)
            .count()
    }

    fn check_constraint(&self, c: &LinearConstraint) -> Result<(), IlpError> {
        for &(_, v) in &c.terms {
            if v.0 >= self.vars.len() {
                return Err(IlpError::Malformed(format!(
                    "constraint {} references undeclared variable #{}",
                    c.name, v.0
                )));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), IlpError> {
        for var in &self.vars {
            let (lo, hi) = var.kind.bounds();
            if lo > hi {
                return Err(IlpError::Malformed(format!(
                    "variable {} has lo > hi",
                    var.name
                )));
            }
        }
        self.constraints
            .iter()
            .try_for_each(|c| self.check_constraint(c))
    }

    /// Checks an assignment against every bound and constraint.
    pub fn verify(&self, values: &[i64]) -> Result<(), String> {
        if values.len() != self.vars.len() {
            return Err(format!(
                "{} values for {} variables",
                values.len(),
                self.vars.len()
            ));
        }
        for (var, &x) in self.vars.iter().zip(values) {
            let (lo, hi) = var.kind.bounds();
            if x < lo || x > hi {
                return Err(format!("{} = {x} outside [{lo}, {hi}]", var.name));
            }
        }
        match self.constraints.iter().find(|c| !c.is_satisfied(values)) {
            Some(c) => Err(format!("constraint {} violated", c.name)),
            None => Ok(()),
        }
    }
}
