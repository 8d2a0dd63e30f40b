//! Built-in catalog of polynomial Painlevé-type Hamiltonian systems.
//!
//! Parameter weights follow the convention in which a parameter carries the
//! degree that makes its monomials reach the Hamiltonian's declared degree;
//! the structural checks in `systems` count parameters as degree zero.

use std::sync::OnceLock;

use super::sysdef::{parse_systems, SystemDef};
use crate::error::{Error, Result};

const CATALOG: &str = r#"
system P1
note First Painlevé equation
var q q weight 2
var p p weight 3
var z z weight 4
ham H degree 6 = 1/2*p^2 - 2*q^3 - z*q
end

system P2
note Second Painlevé equation
var q q weight 1
var p p weight 2
var z z weight 2
var alpha param weight 3
ham H degree 4 = 1/2*p^2 - 1/2*q^4 - 1/2*z*q^2 - alpha*q
end

system P4
note Fourth Painlevé equation
var q q weight 1
var p p weight 1
var z z weight 1
var alpha param weight 2
var beta param weight 2
ham H degree 3 = -p*q^2 + p^2*q - 2*p*q*z - alpha*p + beta*q
end

system P1_2
note Second member of the first Painlevé hierarchy, H^{9/2}
var q1 q weight 2
var q2 q weight 4
var p1 p weight 5
var p2 p weight 3
var z1 z weight 6
var z2 z weight 4
ham H1 degree 8 = 2*p2*p1 + 3*p2^2*q1 + q1^4 - q1^2*q2 - q2^2 - z1*q1 + z2*(q1^2 - q2)
ham H2 degree 10 = p1^2 + 2*p2*p1*q1 - q1^5 + p2^2*q2 + 3*q1^3*q2 - 2*q1*q2^2 + z1*(q1^2 - q2) + z2*(z2*q1 + q1*q2 - p2^2)
end

system P21_2
note Second member of the second-first Painlevé hierarchy, H^{7/2+1}
var q1 q weight 1
var q2 q weight 3
var p1 p weight 4
var p2 p weight 2
var z1 z weight 4
var z2 z weight 2
var alpha param weight 5
ham H1 degree 6 = 2*p1*p2 - p2^3 - p1*q1^2 + q2^2 - z1*p2 + z2*p1 + 2*alpha*q1
ham H2 degree 8 = -p1^2 + p1*p2^2 + p1*p2*q1^2 + 2*p1*q1*q2 + z1*p1 + z2*(z2*p1 - p1*q1^2 + p1*p2) - alpha*(2*p2*q1 + 2*q2 + 2*z2*q1)
end

system P22_2
note Second member of the second-second Painlevé hierarchy, H^{5}
var q1 q weight 1
var q2 q weight 2
var p1 p weight 3
var p2 p weight 2
var z1 z weight 3
var z2 z weight 2
var alpha param weight 4
ham H1 degree 5 = p1*p2 - p1*q1^2 - 2*p1*q2 + p2*q1*q2 + q1*q2^2 + q2*z1 + z2*(q1*q2 - p1) + alpha*q1
ham H2 degree 6 = p1^2 - p1*p2*q1 + p2^2*q2 - 2*p1*q1*q2 - p2*q2^2 + q1^2*q2^2 + z1*(q1*q2 - p1) - z2*(p1*q1 + q2^2 + q2*z2) + alpha*p2
end

system P4_2
note Second member of the fourth Painlevé hierarchy, H^{4+1}
var q1 q weight 1
var q2 q weight 1
var p1 p weight 2
var p2 p weight 2
var z1 z weight 2
var z2 z weight 1
var alpha param weight 3
var beta param weight 3
ham H1 degree 4 = p1^2 + p1*p2 - p1*q1^2 + p2*q1*q2 - p2*q2^2 - z1*p1 + z2*p2*q2 + alpha*q2 + beta*q1
ham H2 degree 5 = p1*p2*q1 - 2*p1*p2*q2 - p2^2*q2 + p2*q1*q2^2 + p2*q2*z1 + z2*(p1*p2 - p2*q2^2 + p2*q2*z2) + (p1 - q1*q2 + q2*z2)*alpha - beta*p2
end

system Cosgrove
note Cosgrove's fourth-order equation F-VI in Hamiltonian form
var q1 q weight 2
var q2 q weight 4
var p1 p weight 5
var p2 p weight 3
var z z weight 6
var alpha param weight 2
ham H degree 8 = -4*p1*p2 - 2*p2^2*q1 - 73/128*q1^4 + 11/8*q1^2*q2 - 1/2*q2^2 - q1*z - 1/48*(q1 + 1/6*alpha)*q1^2*alpha
end

system MatP1
note Matrix Painlevé equation of the first type
var q1 q weight 2
var q2 q weight 4
var p1 p weight 3
var p2 p weight 1
var z z weight 4
var alpha param weight 5
ham H degree 6 = 1/2*p1^2 - 2*q1^3 - 2*p2^2*q2 + 6*q1*q2 - 2*q1*z + 2*alpha*p2
end

system H2323
note Symplectic transform of the second-first hierarchy member at alpha = 0; y_i are coordinates, x_i momenta
var y1 q weight 3
var y2 q weight 3
var x1 p weight 2
var x2 p weight 2
var z1 z weight 4
var z2 z weight 2
ham H1 degree 6 = -4*x1^2*x2 - 8*x2^3 + 1/4*y1^2 + 1/4*y2^2 - 2*z1*x2 - z2*x1^2
ham H2 degree 8 = -x1^4 - 4*x1^2*x2^2 - 1/2*x2*y1^2 + 1/2*x1*y1*y2 - z1*x1^2 - z2^2*x1^2 - 2*z2*x1^2*x2 + 1/4*z2*y1^2
end

system MatP2
note Matrix Painlevé equation of the second type
var q1 q weight 1
var q2 q weight 2
var p1 p weight 2
var p2 p weight 1
var z z weight 2
var alpha param weight 3
var beta param weight 3
ham H degree 4 = 1/2*p1^2 - p1*q1^2 + p1*q2 - 2*p2^2*q2 - 4*p2*q1*q2 - p1*z + 2*alpha*p2 + 2*beta*(p2 + q1)
end

system NY_A4
note Noumi-Yamada system of type A4; parameter weights are unverified
var q1 q weight 1
var q2 q weight 1
var p1 p weight 1
var p2 p weight 1
var z z weight 1
var alpha param weight 2
var beta param weight 2
var gamma param weight 2
var delta param weight 2
ham H degree 3 = 2*p1*p2*q1 + p1*q1*(p1 - q1 - z) + p2*q2*(p2 - q2 - z) + alpha*p1 + beta*q1 + gamma*p2 + delta*q2
end

system MatP4
note Matrix Painlevé equation of the fourth type (nonpositive weight)
var q1 q weight 1
var q2 q weight 2
var p1 p weight 1
var p2 p weight 0
var z z weight 1
var theta0 param weight 2
var theta1 param weight 2
var theta2 param weight 2
ham H degree 3 = 1/2*p1^2*q1 - p1*q1^2 + p1*q2 + 2*p1*p2*q2 - 4*p2*q1*q2 - 2*p2^2*q1*q2 - p1*q1*z - 2*p2*q2*z + 2*p2*q1*theta0 - p1*theta1 + 2*p2*q1*theta1 - p1*theta2 + 2*q1*theta2 + 2*p2*q1*theta2
end

system H1210
note Lie-algebraic system with weight (1,2,1,0; 3)
var q1 q weight 1
var q2 q weight 2
var p1 p weight 1
var p2 p weight 0
var z z weight 1
var alpha2 param weight 2
var beta2 param weight 2
var beta3 param weight 3
ham H degree 3 = -p1^2*q1 - 2*p1*q1^2 + 2*p1*q2 - 2*p1*p2*q2 - 2*p2*q1*q2 + (2*p1*q1 + 2*p2*q2)*z + (2*alpha2 + 2*beta2)*q1 + 2*beta2*p1 + 2*beta3*p2
end

system Hm1142
note Lie-algebraic system with weight (-1,1,4,2; 4)
var q1 q weight -1
var q2 q weight 1
var p1 p weight 4
var p2 p weight 2
var z z weight 2
var beta3 param weight 3
var beta5 param weight 5
ham H degree 4 = p1 - p2^2 - 2*p1*q1*q2 - p2*q2^2 + 2*beta3*q2 + 2*beta5*q1 + p2*z
end

system P1xP1
note Direct product of two autonomous first Painlevé equations
var q1 q weight 2
var q2 q weight 2
var p1 p weight 3
var p2 p weight 3
ham H1 degree 6 = (1/2*p1^2 - 2*q1^3) + (1/2*p2^2 - 2*q2^3)
ham H2 degree 6 = 1/2*p1^2 - 2*q1^3
end

system P2xP2
note Direct product of two autonomous second Painlevé equations
var q1 q weight 1
var q2 q weight 1
var p1 p weight 2
var p2 p weight 2
ham H1 degree 4 = (1/2*p1^2 - 1/2*q1^4) + (1/2*p2^2 - 1/2*q2^4)
ham H2 degree 4 = 1/2*p1^2 - 1/2*q1^4
end

system P4xP4
note Direct product of two autonomous fourth Painlevé equations
var q1 q weight 1
var q2 q weight 1
var p1 p weight 1
var p2 p weight 1
ham H1 degree 3 = (-p1*q1^2 + p1^2*q1) + (-p2*q2^2 + p2^2*q2)
ham H2 degree 3 = -p1*q1^2 + p1^2*q1
end
"#;

fn entries() -> &'static [SystemDef] {
    static ENTRIES: OnceLock<Vec<SystemDef>> = OnceLock::new();
    ENTRIES.get_or_init(|| {
        let base = parse_systems(CATALOG).expect("built-in catalog parses");
        let mut all = Vec::with_capacity(2 * base.len());
        for sys in base {
            let has_extra = sys
                .variables
                .iter()
                .any(|v| !matches!(v.role, super::Role::Q | super::Role::P));
            let auto = has_extra.then(|| {
                sys.autonomous(&format!("{}_auto", sys.id))
                    .expect("autonomous reduction of a catalog entry")
            });
            all.push(sys);
            all.extend(auto);
        }
        all
    })
}

/// Catalog ids in table order.
pub fn catalog_ids() -> Vec<&'static str> {
    entries().iter().map(|s| s.id.as_str()).collect()
}

pub fn catalog(id: &str) -> Result<SystemDef> {
    entries()
        .iter()
        .find(|s| s.id == id)
        .cloned()
        .ok_or_else(|| Error::UnknownSystem {
            id: id.to_string(),
            available: catalog_ids().into_iter().map(String::from).collect(),
        })
}

pub fn catalog_all() -> &'static [SystemDef] {
    entries()
}
