//! JSON topology files.
//!
//! ```json
//! { "h": 4, "r": 2, "users": [[1,2],[1,3],...], "classes": [[0,5],[1,4],[2,3]] }
//! ```
//!
//! Users are 1-based relay lists; classes list 0-based user indices. Saving
//! always writes the canonical form held by [`Network`].

use serde::{Deserialize, Serialize};

use super::{custom_network, Network};
use crate::combinatorics::SortedSubset;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyFile {
    pub h: usize,
    pub r: usize,
    pub users: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<Vec<usize>>>,
}

impl From<&Network> for TopologyFile {
    fn from(net: &Network) -> Self {
        Self {
            h: net.h(),
            r: net.r(),
            users: net.users().iter().map(|u| u.elements().to_vec()).collect(),
            classes: Some(net.classes().to_vec()),
        }
    }
}

impl TopologyFile {
    pub fn into_network(self) -> Result<Network> {
        let users = self
            .users
            .into_iter()
            .map(SortedSubset::new)
            .collect::<Result<Vec<_>>>()?;
        custom_network(self.h, self.r, users, self.classes)
    }
}

impl Network {
    pub fn to_json(&self) -> String {
        let mut s =
            serde_json::to_string_pretty(&TopologyFile::from(self)).expect("topology serializes");
        s.push('\n');
        s
    }

    /// Parses a topology file. A missing `classes` field triggers a resolution search.
    pub fn from_json(text: &str) -> Result<Network> {
        let file: TopologyFile = serde_json::from_str(text)
            .map_err(|e| Error::Format(format!("malformed topology file: {e}")))?;
        file.into_network()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{affine_plane, combination_network};

    #[test]
    fn round_trip_is_lossless() {
        for net in [
            combination_network(4, 2).unwrap(),
            combination_network(6, 3).unwrap(),
            affine_plane(3).unwrap(),
        ] {
            let text = net.to_json();
            let back = Network::from_json(&text).unwrap();
            assert_eq!(back, net);
            assert_eq!(back.to_json(), text);
        }
    }

    #[test]
    fn non_canonical_input_is_canonicalized() {
        let text = r#"{"h":4,"r":2,"users":[[3,4],[1,2],[2,4],[1,3]],"classes":[[2,3],[0,1]]}"#;
        let net = Network::from_json(text).unwrap();
        let file = TopologyFile::from(&net);
        assert_eq!(
            file.users,
            vec![vec![1, 2], vec![1, 3], vec![2, 4], vec![3, 4]]
        );
        assert_eq!(file.classes, Some(vec![vec![0, 3], vec![1, 2]]));
    }

    #[test]
    fn missing_classes_are_searched() {
        let text = r#"{"h":4,"r":2,"users":[[1,2],[3,4],[1,3],[2,4]]}"#;
        assert_eq!(Network::from_json(text).unwrap().k_tilde(), 2);
    }

    #[test]
    fn malformed_files() {
        assert!(matches!(Network::from_json("{"), Err(Error::Format(_))));
        assert!(Network::from_json(r#"{"h":4,"r":2,"users":[[1,1]]}"#).is_err());
        assert!(Network::from_json(r#"{"h":3,"r":2,"users":[[1,2],[1,3],[2,3]]}"#).is_err());
    }
}
