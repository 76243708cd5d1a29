use std::fmt;

/// Identifier of a vertex: an integer in `[0, n)`.
///
/// The natural order on the underlying integer is the order used for every
/// ID-based tie-break in the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

impl VertexId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<usize> for VertexId {
    fn from(v: usize) -> Self {
        VertexId(v)
    }
}

/// Compact unique edge identifier: the minimal vertex of the edge together
/// with that vertex's port number for the edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId {
    /// Minimal vertex contained in the edge.
    pub owner: VertexId,
    /// Position of the edge in the owner's incidence list.
    pub port: usize,
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.owner, self.port)
    }
}
