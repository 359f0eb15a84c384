/// Indexed binary max-heap of variable indices keyed by an external activity array.
#[derive(Clone, Debug, Default)]
pub(crate) struct VarHeap {
    heap: Vec<u32>,
    position: Vec<Option<u32>>,
}

impl VarHeap {
    pub fn grow(&mut self, n_vars: usize) {
        if self.position.len() < n_vars {
            self.position.resize(n_vars, None);
        }
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn contains(&self, var: usize) -> bool {
        self.position[var].is_some()
    }

    pub fn at(&self, i: usize) -> usize {
        self.heap[i] as usize
    }

    pub fn insert(&mut self, var: usize, activity: &[f64]) {
        if self.contains(var) {
            return;
        }
        let i = self.heap.len();
        self.heap.push(var as u32);
        self.position[var] = Some(i as u32);
        self.sift_up(i, activity);
    }

    /// Restores the heap property after `var`'s activity increased.
    pub fn increased(&mut self, var: usize, activity: &[f64]) {
        if let Some(i) = self.position[var] {
            self.sift_up(i as usize, activity);
        }
    }

    pub fn pop(&mut self, activity: &[f64]) -> Option<usize> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.position[top as usize] = None;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.position[last as usize] = Some(0);
            self.sift_down(0, activity);
        }
        Some(top as usize)
    }

    fn sift_up(&mut self, mut i: usize, activity: &[f64]) {
        let var = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            let pv = self.heap[parent];
            if activity[var as usize] <= activity[pv as usize] {
                break;
            }
            self.heap[i] = pv;
            self.position[pv as usize] = Some(i as u32);
            i = parent;
        }
        self.heap[i] = var;
        self.position[var as usize] = Some(i as u32);
    }

    fn sift_down(&mut self, mut i: usize, activity: &[f64]) {
        let var = self.heap[i];
        let n = self.heap.len();
        loop {
            let left = 2 * i + 1;
            if left >= n {
                break;
            }
            let right = left + 1;
            let child = if right < n
                && activity[self.heap[right] as usize] > activity[self.heap[left] as usize]
            {
                right
            } else {
                left
            };
            let cv = self.heap[child];
            if activity[cv as usize] <= activity[var as usize] {
                break;
            }
            self.heap[i] = cv;
            self.position[cv as usize] = Some(i as u32);
            i = child;
        }
        self.heap[i] = var;
        self.position[var as usize] = Some(i as u32);
    }
}
