use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Only two- and three-dimensional problems are supported.
    UnsupportedDimension(usize),
    /// A mesh needs at least one cell per axis.
    EmptyMesh,
    /// Polynomial degree outside the supported range.
    UnsupportedDegree(usize),
    /// The interface touches or crosses the boundary of the unit box.
    InterfaceMeetsBoundary,
    /// Non-positive radius.
    InvalidRadius(f64),
    /// The normal is undefined at the center of the sphere.
    DegenerateNormal,
    /// A surface quadrature point could not be placed in a mesh cell.
    UnassignedQuadraturePoint { index: usize },
    /// A surface quadrature point lies outside the cell it was assigned to.
    QuadraturePointOutsideCell { index: usize, cell: usize },
    /// Weight exponent outside `(-1/2, 1/2)`.
    AlphaOutOfRange(f64),
    /// Mesh sizes passed to an order-of-convergence computation do not halve.
    NonHalvingSequence,
    /// The Green kernel was evaluated at zero separation.
    SingularKernel,
    /// Target point too close to the interface for the layer potential.
    TooCloseToInterface { distance: f64 },
    /// Conjugate gradients did not reach the requested tolerance.
    SolverDidNotConverge {
        n_cells_per_axis: usize,
        iterations: usize,
        relative_residual: f64,
    },
    /// Any other rejected parameter.
    InvalidParameter(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnsupportedDimension(d) => write!(f, "unsupported dimension {d}, expected 2 or 3"),
            Error::EmptyMesh => write!(f, "mesh needs at least one cell per axis"),
            Error::UnsupportedDegree(p) => write!(f, "unsupported polynomial degree {p}"),
            Error::InterfaceMeetsBoundary => {
                write!(f, "interface intersects the boundary of the unit box")
            }
            Error::InvalidRadius(r) => write!(f, "invalid radius {r}"),
            Error::DegenerateNormal => write!(f, "normal undefined at the sphere center"),
            Error::UnassignedQuadraturePoint { index } => {
                write!(f, "interface quadrature point {index} has no owner cell")
            }
            Error::QuadraturePointOutsideCell { index, cell } => {
                write!(f, "interface quadrature point {index} lies outside its owner cell {cell}")
            }
            Error::AlphaOutOfRange(a) => write!(f, "weight exponent {a} outside (-1/2, 1/2)"),
            Error::NonHalvingSequence => write!(f, "mesh sizes must halve between levels"),
            Error::SingularKernel => write!(f, "Green kernel evaluated at zero separation"),
            Error::TooCloseToInterface { distance } => {
                write!(f, "evaluation point at distance {distance:e} from the interface")
            }
            Error::SolverDidNotConverge {
                n_cells_per_axis,
                iterations,
                relative_residual,
            } => write!(
                f,
                "CG did not converge on the {n_cells_per_axis}-cell grid: \
                 relative residual {relative_residual:e} after {iterations} iterations"
            ),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
