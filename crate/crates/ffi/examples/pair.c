#include <stdio.h>
#include "mqnmr.h"
int main(void) {
  MqnmrSimulation *sim = NULL;
  if (mqnmr_simulation_new_two_spin(3.0, 2*3.141592653589793*1307, &sim) != MQNMR_STATUS_OK) return 1;
  MqnmrEntanglement e;
  MqnmrStatus s = mqnmr_simulation_entanglement(sim, 3.141592653589793/(4*2*3.141592653589793*1307), 0, 1, &e);
  printf("%s C=%.12f EW=%.6f\n", mqnmr_status_message(s), e.concurrence, e.witness);
  mqnmr_simulation_free(sim);
  return (int)s;
}
