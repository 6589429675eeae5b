// Restricted Algorithmic C generated from RAR source.
#include "rac_shim.h"

const uint ARR_SZ = 256;

struct Arrayset {
  array<uint, ARR_SZ> anext;
  array<si64, ARR_SZ> avals;
  uint free_head;
  uint used_head;
};

Arrayset aset_init(Arrayset aset) {
  for (uint i = 0; i < ARR_SZ; i++) {
    aset.anext[i] = i + 1;
    aset.avals[i] = 0;
  }
  aset.free_head = 0;
  aset.used_head = ARR_SZ;
  return aset;
}

bool aset_is_element(si64 val, Arrayset aset) {
  bool found = false;
  uint curr_index = aset.used_head;
  for (uint _step = 0; _step < ARR_SZ; _step++) {
    if (curr_index < ARR_SZ) {
      if (aset.avals[curr_index] == val) {
        found = true;
        curr_index = ARR_SZ;
      } else {
        curr_index = aset.anext[curr_index];
      }
    }
  }
  return found;
}

uint aset_element_prev_from(uint start, si64 val, Arrayset aset) {
  uint result = ARR_SZ;
  uint prev_index = start;
  for (uint _step = 0; _step < ARR_SZ; _step++) {
    if (result >= ARR_SZ && prev_index < ARR_SZ) {
      uint next_index = aset.anext[prev_index];
      if (next_index < ARR_SZ && aset.avals[next_index] == val) {
        result = prev_index;
      } else {
        prev_index = next_index;
      }
    }
  }
  return result;
}

uint aset_len(Arrayset aset) {
  uint count = 0;
  uint curr_index = aset.used_head;
  for (uint _step = 0; _step < ARR_SZ; _step++) {
    if (curr_index < ARR_SZ) {
      count = count + 1;
      curr_index = aset.anext[curr_index];
    }
  }
  return count;
}

uint aset_len_free(Arrayset aset) {
  uint count = 0;
  uint curr_index = aset.free_head;
  for (uint _step = 0; _step < ARR_SZ; _step++) {
    if (curr_index < ARR_SZ) {
      count = count + 1;
      curr_index = aset.anext[curr_index];
    }
  }
  return count;
}

Arrayset aset_add(si64 val, Arrayset aset) {
  uint curr_index = aset.free_head;
  if (curr_index >= ARR_SZ) {
    return aset;
  } else {
    if (aset.used_head < ARR_SZ && aset_is_element(val, aset)) {
      return aset;
    } else {
      aset.free_head = aset.anext[aset.free_head];
      aset.avals[curr_index] = val;
      aset.anext[curr_index] = aset.used_head;
      aset.used_head = curr_index;
      return aset;
    }
  }
}

Arrayset aset_del(si64 val, Arrayset aset) {
  uint curr_index = aset.used_head;
  uint prev_index;
  if (aset.used_head >= ARR_SZ) {
    return aset;
  } else {
    if (aset.avals[curr_index] == val) {
      aset.used_head = aset.anext[curr_index];
      aset.anext[curr_index] = aset.free_head;
      aset.free_head = curr_index;
      return aset;
    } else {
      prev_index = aset_element_prev_from(aset.used_head, val, aset);
      if (prev_index >= ARR_SZ) {
        return aset;
      } else {
        curr_index = aset.anext[prev_index];
        if (curr_index >= ARR_SZ) {
          return aset;
        } else {
          aset.anext[prev_index] = aset.anext[curr_index];
          aset.anext[curr_index] = aset.free_head;
          aset.free_head = curr_index;
          return aset;
        }
      }
    }
  }
}
