// source: grpc-go#1424 (minimal reconstruction)
// expected: deadlock
//
// The balancer watcher waits for an address update that is never sent,
// while the dialer waits for the watcher to report readiness.
package main

type Balancer struct {
	notify chan []string
}

func (b *Balancer) Notify() chan []string {
	return b.notify
}

func lbWatcher(b *Balancer, ready chan bool) {
	addrs := <-b.Notify()
	_ = addrs
	ready <- true
}

func main() {
	b := &Balancer{notify: make(chan []string)}
	ready := make(chan bool)
	go lbWatcher(b, ready)
	<-ready
}
